#ifndef EVALSIM_ERRORS_HPP_
#define EVALSIM_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace evalsim {

// Argument outside the documented domain of an operation.
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

// A sample that cannot support the requested estimator (zero variance,
// boundary mean, variance beyond the family's reachable range).
class DegenerateSample : public std::runtime_error {
public:
    explicit DegenerateSample(const std::string& what) : std::runtime_error(what) {}
};

class NotPositiveDefinite : public std::runtime_error {
public:
    NotPositiveDefinite(const std::string& what, double min_eigenvalue)
        : std::runtime_error(what), min_eigenvalue(min_eigenvalue) {}
    double min_eigenvalue;
};

class NonConvergence : public std::runtime_error {
public:
    explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public std::invalid_argument {
public:
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

class SingularMatrix : public std::runtime_error {
public:
    explicit SingularMatrix(const std::string& what) : std::runtime_error(what) {}
};

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace evalsim

#endif  // EVALSIM_ERRORS_HPP_
