#include "evalsim/rules.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "evalsim/errors.hpp"

namespace evalsim {

namespace {

// Tied leaders resolved toward the lowest index, with a trace entry.
std::size_t argmax_with_trace(const std::vector<double>& scores,
                              std::vector<std::string>& trace, const Profile& profile) {
    std::size_t winner = 0;
    for (std::size_t c = 1; c < scores.size(); ++c) {
        if (scores[c] > scores[winner]) winner = c;
    }
    std::vector<std::size_t> tied;
    for (std::size_t c = 0; c < scores.size(); ++c) {
        if (scores[c] == scores[winner]) tied.push_back(c);
    }
    if (tied.size() > 1) {
        std::ostringstream os;
        os << "tie between";
        for (std::size_t c : tied) os << ' ' << profile.candidate_names()[c];
        os << "; lowest index wins";
        trace.push_back(os.str());
    }
    return winner;
}

double lower_median(const std::vector<double>& sorted) {
    return sorted[(sorted.size() - 1) / 2];
}

}  // namespace

ElectionResult range_winner(const Profile& profile) {
    ElectionResult result;
    result.rule = "range";
    result.scores.resize(profile.candidates(), 0.0);
    for (std::size_t v = 0; v < profile.voters(); ++v) {
        for (std::size_t c = 0; c < profile.candidates(); ++c) {
            result.scores[c] += profile.at(v, c);
        }
    }
    for (auto& score : result.scores) score /= static_cast<double>(profile.voters());
    result.winner = argmax_with_trace(result.scores, result.tie_trace, profile);
    result.winner_name = profile.candidate_names()[result.winner];
    return result;
}

ElectionResult majority_judgment_winner(const Profile& profile) {
    ElectionResult result;
    result.rule = "mj";
    const std::size_t m = profile.candidates();

    std::vector<std::vector<double>> grades(m);
    for (std::size_t c = 0; c < m; ++c) {
        grades[c] = profile.column(c);
        std::sort(grades[c].begin(), grades[c].end());
    }
    result.scores.resize(m);
    for (std::size_t c = 0; c < m; ++c) result.scores[c] = lower_median(grades[c]);

    std::vector<std::size_t> tied;
    double best = result.scores[0];
    for (std::size_t c = 0; c < m; ++c) best = std::max(best, result.scores[c]);
    for (std::size_t c = 0; c < m; ++c) {
        if (result.scores[c] == best) tied.push_back(c);
    }

    // Iterative tie-break: drop one median grade from each tied
    // candidate, recompare, repeat.
    std::map<std::size_t, std::vector<double>> remaining;
    for (std::size_t c : tied) remaining[c] = grades[c];
    while (tied.size() > 1 && !remaining[tied[0]].empty()) {
        std::ostringstream os;
        os << "medians tied at " << best << "; removing one median grade from";
        for (std::size_t c : tied) {
            auto& multiset = remaining[c];
            const double median = lower_median(multiset);
            multiset.erase(std::lower_bound(multiset.begin(), multiset.end(), median));
            os << ' ' << profile.candidate_names()[c];
        }
        result.tie_trace.push_back(os.str());
        if (remaining[tied[0]].empty()) break;

        best = lower_median(remaining[tied[0]]);
        for (std::size_t c : tied) best = std::max(best, lower_median(remaining[c]));
        std::vector<std::size_t> still_tied;
        for (std::size_t c : tied) {
            if (lower_median(remaining[c]) == best) still_tied.push_back(c);
        }
        tied = std::move(still_tied);
    }
    if (tied.size() > 1) {
        std::ostringstream os;
        os << "grades exhausted; lowest index wins among";
        for (std::size_t c : tied) os << ' ' << profile.candidate_names()[c];
        result.tie_trace.push_back(os.str());
    }

    result.winner = tied.front();
    result.winner_name = profile.candidate_names()[result.winner];
    return result;
}

ElectionResult approval_winner(const Profile& profile, double threshold) {
    if (threshold < 0.0 || threshold > profile.scale().max_value()) {
        throw DomainError("approval threshold outside the evaluation scale");
    }
    ElectionResult result;
    result.rule = "approval";
    result.scores.resize(profile.candidates(), 0.0);
    for (std::size_t v = 0; v < profile.voters(); ++v) {
        for (std::size_t c = 0; c < profile.candidates(); ++c) {
            if (profile.at(v, c) >= threshold) result.scores[c] += 1.0;
        }
    }
    result.winner = argmax_with_trace(result.scores, result.tie_trace, profile);
    result.winner_name = profile.candidate_names()[result.winner];
    return result;
}

RankingsResult rankings(const Profile& profile, TiePolicy policy) {
    const std::size_t m = profile.candidates();
    RankingsResult result;
    result.orders.reserve(profile.voters());

    for (std::size_t v = 0; v < profile.voters(); ++v) {
        std::vector<std::size_t> order(m);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const double ea = profile.at(v, a);
            const double eb = profile.at(v, b);
            return ea != eb ? ea > eb : a < b;
        });
        bool has_tie = false;
        for (std::size_t i = 0; i + 1 < m; ++i) {
            if (profile.at(v, order[i]) == profile.at(v, order[i + 1])) has_tie = true;
        }
        if (has_tie) result.tied_voters.push_back(v);
        result.orders.push_back(std::move(order));
    }
    if (policy == TiePolicy::StrictOrFail && !result.tied_voters.empty()) {
        result.orders.clear();
    }
    return result;
}

std::vector<std::vector<std::size_t>> all_strict_orders(std::size_t candidates) {
    std::vector<std::size_t> order(candidates);
    std::iota(order.begin(), order.end(), 0);
    std::vector<std::vector<std::size_t>> out;
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

RankingDistribution ranking_distribution(const Profile& profile) {
    const std::size_t m = profile.candidates();
    if (m > 7) throw DomainError("ranking_distribution: m must be <= 7");

    const auto orders = all_strict_orders(m);
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < orders.size(); ++i) index[orders[i]] = i;

    RankingDistribution dist;
    dist.counts.assign(orders.size(), 0);
    const auto ranked = rankings(profile, TiePolicy::IndexBreak);
    for (const auto& order : ranked.orders) ++dist.counts[index.at(order)];
    return dist;
}

}  // namespace evalsim
