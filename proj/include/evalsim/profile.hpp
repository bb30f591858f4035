#ifndef EVALSIM_PROFILE_HPP_
#define EVALSIM_PROFILE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "evalsim/errors.hpp"

namespace evalsim {

// Evaluation scale: the closed unit interval, or the grade set {0..K}.
class Scale {
public:
    enum class Kind { Continuous, Discrete };

    static Scale continuous() { return Scale(Kind::Continuous, 0); }
    static Scale discrete(int levels);

    Kind kind() const { return kind_; }
    bool is_discrete() const { return kind_ == Kind::Discrete; }

    // Top grade K; only meaningful on discrete scales.
    int levels() const { return levels_; }

    // Upper bound of the value range: 1.0 continuous, K discrete.
    double max_value() const { return is_discrete() ? levels_ : 1.0; }

    bool contains(double value) const;

    friend bool operator==(const Scale& a, const Scale& b) {
        return a.kind_ == b.kind_ && a.levels_ == b.levels_;
    }

private:
    Scale(Kind kind, int levels) : kind_(kind), levels_(levels) {}
    Kind kind_;
    int levels_;
};

// Map a continuous evaluation to a grade in {0..K}: min(floor((K+1)e), K).
// The clamp keeps e = 1 inside the grade set.
int discretize(double e, int levels);

struct Violation {
    enum class Type { OutOfRange, NonInteger, DuplicateName, EmptyProfile };
    Type type;
    std::size_t voter = 0;      // 1-based; 0 when not applicable
    std::size_t candidate = 0;  // 1-based; 0 when not applicable
    double value = 0.0;
    std::string message;
};

class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<Violation> violations);
    const std::vector<Violation>& violations() const { return violations_; }

private:
    std::vector<Violation> violations_;
};

// Immutable n-by-m matrix of evaluations with its scale and candidate
// names. Shareable across threads once constructed.
class Profile {
public:
    Profile(Scale scale, std::vector<std::string> candidate_names,
            std::vector<double> values, std::size_t voters);

    const Scale& scale() const { return scale_; }
    std::size_t voters() const { return voters_; }
    std::size_t candidates() const { return names_.size(); }
    const std::vector<std::string>& candidate_names() const { return names_; }

    double at(std::size_t voter, std::size_t candidate) const {
        return values_[voter * names_.size() + candidate];
    }
    const std::vector<double>& values() const { return values_; }

    std::vector<double> column(std::size_t candidate) const;
    std::vector<double> row(std::size_t voter) const;

private:
    Scale scale_;
    std::vector<std::string> names_;
    std::vector<double> values_;  // row-major, voters * candidates
    std::size_t voters_;
};

std::vector<std::string> default_candidate_names(std::size_t m);

// All violations in a raw rectangular matrix; empty result means valid.
std::vector<Violation> check_profile(const std::vector<double>& values, std::size_t voters,
                                     const Scale& scale,
                                     const std::vector<std::string>& candidate_names);

// Construct a validated Profile or throw ValidationError carrying every
// violation found. Empty name list selects cand_1..cand_m.
Profile validate_profile(std::vector<double> values, std::size_t voters, const Scale& scale,
                         std::vector<std::string> candidate_names = {});

}  // namespace evalsim

#endif  // EVALSIM_PROFILE_HPP_
