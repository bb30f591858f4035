#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>
#include <vector>

#include "evalsim/csv.hpp"
#include "evalsim/errors.hpp"
#include "evalsim/profile.hpp"
#include "evalsim/rng.hpp"

using namespace evalsim;

TEST_CASE("discretize maps the unit interval onto the grade set") {
    CHECK(discretize(0.0, 6) == 0);
    CHECK(discretize(1.0, 6) == 6);  // floor(7*1) = 7 clamps to K
    CHECK(discretize(0.5, 6) == 3);  // floor(3.5)
    CHECK_THROWS_AS(discretize(-0.01, 6), DomainError);
    CHECK_THROWS_AS(discretize(1.01, 6), DomainError);
    CHECK_THROWS_AS(discretize(0.5, 0), DomainError);
}

TEST_CASE("discretize is non-decreasing with exact grade preimages") {
    const int levels = 6;
    int previous = 0;
    for (int i = 0; i <= 10000; ++i) {
        const int grade = discretize(i / 10000.0, levels);
        CHECK(grade >= previous);
        previous = grade;
    }
    for (int g = 0; g < levels; ++g) {
        CHECK(discretize(g / (levels + 1.0), levels) == g);
        CHECK(discretize((g + 1.0) / (levels + 1.0) - 1e-12, levels) == g);
        CHECK(discretize((g + 1.0) / (levels + 1.0), levels) == g + 1);
    }
}

TEST_CASE("derive_stream is deterministic and index-sensitive") {
    RandomSource a = derive_stream(12345, 7);
    RandomSource b = derive_stream(12345, 7);
    for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

    RandomSource c = derive_stream(12345, 0);
    RandomSource d = derive_stream(12345, 1);
    CHECK(c.next_u64() != d.next_u64());
}

TEST_CASE("uniform draws stay in [0,1) and (0,1)") {
    RandomSource source = derive_stream(99, 0);
    for (int i = 0; i < 10000; ++i) {
        const double closed = source.next_double();
        const double open = source.next_open();
        CHECK(closed >= 0.0);
        CHECK(closed < 1.0);
        CHECK(open > 0.0);
        CHECK(open < 1.0);
    }
}

TEST_CASE("sibling streams look pairwise independent") {
    // 100 streams, 1e4 uniforms each: all pairwise sample correlations
    // stay small.
    constexpr std::size_t streams = 100;
    constexpr std::size_t draws = 10000;
    std::vector<std::vector<double>> samples(streams);
    for (std::size_t s = 0; s < streams; ++s) {
        RandomSource source = derive_stream(2024, s);
        samples[s].resize(draws);
        for (auto& value : samples[s]) value = source.next_double();
    }
    std::vector<double> means(streams, 0.0), sds(streams, 0.0);
    for (std::size_t s = 0; s < streams; ++s) {
        for (double v : samples[s]) means[s] += v;
        means[s] /= draws;
        for (double v : samples[s]) sds[s] += (v - means[s]) * (v - means[s]);
        sds[s] = std::sqrt(sds[s]);
    }
    double worst = 0.0;
    for (std::size_t i = 0; i < streams; ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            double dot = 0.0;
            for (std::size_t k = 0; k < draws; ++k) {
                dot += (samples[i][k] - means[i]) * (samples[j][k] - means[j]);
            }
            worst = std::max(worst, std::fabs(dot / (sds[i] * sds[j])));
        }
    }
    CHECK(worst < 0.05);
}

TEST_CASE("validate_profile accepts interior points") {
    const Profile p = validate_profile({0.5}, 1, Scale::continuous());
    CHECK(p.voters() == 1);
    CHECK(p.candidates() == 1);
    CHECK(p.candidate_names()[0] == "cand_1");
    CHECK(p.at(0, 0) == 0.5);
}

TEST_CASE("validate_profile reports violations with coordinates") {
    const auto out_of_range = check_profile({1.2}, 1, Scale::continuous(), {"a"});
    REQUIRE(out_of_range.size() == 1);
    CHECK(out_of_range[0].type == Violation::Type::OutOfRange);
    CHECK(out_of_range[0].voter == 1);
    CHECK(out_of_range[0].candidate == 1);
    CHECK(out_of_range[0].value == 1.2);

    const auto non_integer = check_profile({2.5}, 1, Scale::discrete(6), {"a"});
    REQUIRE(non_integer.size() == 1);
    CHECK(non_integer[0].type == Violation::Type::NonInteger);

    const auto duplicate = check_profile({0.1, 0.2}, 1, Scale::continuous(), {"a", "a"});
    REQUIRE(duplicate.size() == 1);
    CHECK(duplicate[0].type == Violation::Type::DuplicateName);

    CHECK_THROWS_AS(validate_profile({1.2}, 1, Scale::continuous()), ValidationError);
    CHECK_THROWS_AS(validate_profile({}, 0, Scale::continuous()), ValidationError);
}

TEST_CASE("profile CSV writes the documented shape and round-trips") {
    const Profile p = validate_profile({0.25, 1.0, 0.5, 0.125}, 2, Scale::continuous(),
                                       {"left", "right"});
    std::ostringstream first;
    write_profile_csv(p, first);
    CHECK(first.str().rfind("voter,left,right\n", 0) == 0);

    std::istringstream in(first.str());
    const Profile reread = read_profile_csv(in);
    std::ostringstream second;
    write_profile_csv(reread, second);
    CHECK(first.str() == second.str());
    for (std::size_t v = 0; v < 2; ++v) {
        for (std::size_t c = 0; c < 2; ++c) CHECK(reread.at(v, c) == p.at(v, c));
    }
}

TEST_CASE("profile CSV preserves doubles through 17 significant digits") {
    RandomSource source = derive_stream(5, 0);
    std::vector<double> values(30);
    for (auto& v : values) v = source.next_double();
    const Profile p = validate_profile(values, 10, Scale::continuous());
    std::ostringstream out;
    write_profile_csv(p, out);
    std::istringstream in(out.str());
    const Profile reread = read_profile_csv(in);
    for (std::size_t v = 0; v < 10; ++v) {
        for (std::size_t c = 0; c < 3; ++c) CHECK(reread.at(v, c) == p.at(v, c));
    }
}

TEST_CASE("discrete CSV uses bare integers and infers the scale") {
    const Profile p = validate_profile({0, 3, 6, 2}, 2, Scale::discrete(6), {"a", "b"});
    std::ostringstream out;
    write_profile_csv(p, out);
    CHECK(out.str() == "voter,a,b\nv1,0,3\nv2,6,2\n");

    std::istringstream in(out.str());
    const Profile reread = read_profile_csv(in);
    CHECK(reread.scale().is_discrete());
    CHECK(reread.scale().levels() == 6);
}

TEST_CASE("malformed CSV fails with row diagnostics") {
    std::istringstream missing_field("voter,a,b\nv1,0.5\n");
    CHECK_THROWS_AS(read_profile_csv(missing_field), IoError);
    std::istringstream bad_number("voter,a\nv1,zap\n");
    CHECK_THROWS_AS(read_profile_csv(bad_number), IoError);
    std::istringstream empty("");
    CHECK_THROWS_AS(read_profile_csv(empty), IoError);
    std::istringstream header_only("voter,a\n");
    CHECK_THROWS_AS(read_profile_csv(header_only), IoError);
}

TEST_CASE("transposed CSV emits candidates in rows") {
    const Profile p = validate_profile({0.25, 0.5}, 1, Scale::continuous(), {"a", "b"});
    std::ostringstream out;
    write_profile_csv_transposed(p, out);
    CHECK(out.str() == "candidate,v1\na,0.25\nb,0.5\n");
}
