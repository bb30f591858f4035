#ifndef EVALSIM_RULES_HPP_
#define EVALSIM_RULES_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "evalsim/profile.hpp"

namespace evalsim {

struct ElectionResult {
    std::string rule;
    std::vector<double> scores;  // per candidate: means, median grades or approvals
    std::size_t winner = 0;      // 0-based candidate index
    std::string winner_name;
    std::vector<std::string> tie_trace;  // non-empty iff a tie occurred
};

// Highest mean evaluation wins; ties fall to the lowest index, logged.
ElectionResult range_winner(const Profile& profile);

// Best lower-median grade wins. Tied leaders drop one median grade each
// and recompare until the tie breaks; index order is the last resort.
ElectionResult majority_judgment_winner(const Profile& profile);

// Approval iff evaluation >= threshold; threshold must sit in the scale.
ElectionResult approval_winner(const Profile& profile, double threshold);

enum class TiePolicy {
    StrictOrFail,  // report tied voters instead of ordering them
    IndexBreak,    // resolve equal evaluations by candidate index
};

struct RankingsResult {
    // Per-voter candidate indices, best first. Empty under StrictOrFail
    // when ties were found.
    std::vector<std::vector<std::size_t>> orders;
    std::vector<std::size_t> tied_voters;  // 0-based voter indices with ties
};

RankingsResult rankings(const Profile& profile, TiePolicy policy);

// All strict orders on m candidates, lexicographic by candidate index.
std::vector<std::vector<std::size_t>> all_strict_orders(std::size_t candidates);

struct RankingDistribution {
    std::vector<std::size_t> counts;  // aligned with all_strict_orders(m), sums to n
};

// Counts of observed rankings over the m! strict orders (index-break
// ties); requires m <= 7.
RankingDistribution ranking_distribution(const Profile& profile);

}  // namespace evalsim

#endif  // EVALSIM_RULES_HPP_
