#include "evalsim/profile.hpp"

#include <cmath>
#include <set>
#include <sstream>

namespace evalsim {

Scale Scale::discrete(int levels) {
    if (levels < 1) {
        throw DomainError("discrete scale needs K >= 1, got K=" + std::to_string(levels));
    }
    return Scale(Kind::Discrete, levels);
}

bool Scale::contains(double value) const {
    if (!std::isfinite(value)) return false;
    if (kind_ == Kind::Continuous) return value >= 0.0 && value <= 1.0;
    return value >= 0.0 && value <= levels_ && value == std::floor(value);
}

int discretize(double e, int levels) {
    if (levels < 1) throw DomainError("discretize: K must be >= 1");
    if (!(e >= 0.0 && e <= 1.0)) {
        throw DomainError("discretize: evaluation " + std::to_string(e) + " outside [0,1]");
    }
    const int grade = static_cast<int>(std::floor((levels + 1) * e));
    return grade > levels ? levels : grade;
}

namespace {

std::string violation_message(const Violation& v) {
    std::ostringstream os;
    switch (v.type) {
        case Violation::Type::OutOfRange:
            os << "OutOfRange(" << v.voter << "," << v.candidate << "," << v.value << ")";
            break;
        case Violation::Type::NonInteger:
            os << "NonInteger(" << v.voter << "," << v.candidate << ")";
            break;
        case Violation::Type::DuplicateName:
            os << "DuplicateName(" << v.message << ")";
            break;
        case Violation::Type::EmptyProfile:
            os << "EmptyProfile";
            break;
    }
    return os.str();
}

std::string join_messages(const std::vector<Violation>& violations) {
    std::ostringstream os;
    os << "invalid profile:";
    for (const auto& v : violations) os << " " << violation_message(v);
    return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations)
    : std::runtime_error(join_messages(violations)), violations_(std::move(violations)) {}

Profile::Profile(Scale scale, std::vector<std::string> candidate_names,
                 std::vector<double> values, std::size_t voters)
    : scale_(scale), names_(std::move(candidate_names)), values_(std::move(values)),
      voters_(voters) {
    if (names_.empty() || voters_ == 0 || values_.size() != voters_ * names_.size()) {
        throw DimensionMismatch("profile matrix is not voters x candidates");
    }
}

std::vector<double> Profile::column(std::size_t candidate) const {
    std::vector<double> out(voters_);
    for (std::size_t v = 0; v < voters_; ++v) out[v] = at(v, candidate);
    return out;
}

std::vector<double> Profile::row(std::size_t voter) const {
    std::vector<double> out(names_.size());
    for (std::size_t c = 0; c < names_.size(); ++c) out[c] = at(voter, c);
    return out;
}

std::vector<std::string> default_candidate_names(std::size_t m) {
    std::vector<std::string> names;
    names.reserve(m);
    for (std::size_t c = 1; c <= m; ++c) names.push_back("cand_" + std::to_string(c));
    return names;
}

std::vector<Violation> check_profile(const std::vector<double>& values, std::size_t voters,
                                     const Scale& scale,
                                     const std::vector<std::string>& candidate_names) {
    std::vector<Violation> violations;
    const std::size_t m = candidate_names.size();
    if (voters == 0 || m == 0) {
        violations.push_back({Violation::Type::EmptyProfile, 0, 0, 0.0, ""});
        return violations;
    }
    if (values.size() != voters * m) {
        throw DimensionMismatch("check_profile: matrix size does not match voters x candidates");
    }

    std::set<std::string> seen;
    for (const auto& name : candidate_names) {
        if (name.empty() || !seen.insert(name).second) {
            violations.push_back({Violation::Type::DuplicateName, 0, 0, 0.0, name});
        }
    }

    for (std::size_t v = 0; v < voters; ++v) {
        for (std::size_t c = 0; c < m; ++c) {
            const double e = values[v * m + c];
            const bool in_range =
                std::isfinite(e) && e >= 0.0 && e <= scale.max_value();
            if (!in_range) {
                violations.push_back({Violation::Type::OutOfRange, v + 1, c + 1, e, ""});
            } else if (scale.is_discrete() && e != std::floor(e)) {
                violations.push_back({Violation::Type::NonInteger, v + 1, c + 1, e, ""});
            }
        }
    }
    return violations;
}

Profile validate_profile(std::vector<double> values, std::size_t voters, const Scale& scale,
                         std::vector<std::string> candidate_names) {
    if (candidate_names.empty() && voters > 0 && !values.empty() && values.size() % voters == 0) {
        candidate_names = default_candidate_names(values.size() / voters);
    }
    auto violations = check_profile(values, voters, scale, candidate_names);
    if (!violations.empty()) throw ValidationError(std::move(violations));
    return Profile(scale, std::move(candidate_names), std::move(values), voters);
}

}  // namespace evalsim
