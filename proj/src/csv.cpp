#include "evalsim/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "evalsim/errors.hpp"

namespace evalsim {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

double parse_value(const std::string& field, std::size_t row, std::size_t column) {
    try {
        std::size_t consumed = 0;
        const double value = std::stod(field, &consumed);
        if (consumed != field.size()) throw std::invalid_argument(field);
        return value;
    } catch (const std::exception&) {
        throw IoError("csv: row " + std::to_string(row) + ", column " + std::to_string(column) +
                      ": cannot parse value '" + field + "'");
    }
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string format_value(double value, bool discrete) {
    char buffer[40];
    if (discrete) {
        std::snprintf(buffer, sizeof buffer, "%lld", static_cast<long long>(value));
    } else {
        std::snprintf(buffer, sizeof buffer, "%.17g", value);
    }
    return buffer;
}

void write_profile_csv(const Profile& profile, std::ostream& out) {
    const bool discrete = profile.scale().is_discrete();
    out << "voter";
    for (const auto& name : profile.candidate_names()) out << ',' << name;
    out << '\n';
    for (std::size_t v = 0; v < profile.voters(); ++v) {
        out << 'v' << (v + 1);
        for (std::size_t c = 0; c < profile.candidates(); ++c) {
            out << ',' << format_value(profile.at(v, c), discrete);
        }
        out << '\n';
    }
}

void write_profile_csv(const Profile& profile, const std::string& path) {
    auto out = open_for_write(path);
    write_profile_csv(profile, out);
}

void write_profile_csv_transposed(const Profile& profile, std::ostream& out) {
    const bool discrete = profile.scale().is_discrete();
    out << "candidate";
    for (std::size_t v = 1; v <= profile.voters(); ++v) out << ",v" << v;
    out << '\n';
    for (std::size_t c = 0; c < profile.candidates(); ++c) {
        out << profile.candidate_names()[c];
        for (std::size_t v = 0; v < profile.voters(); ++v) {
            out << ',' << format_value(profile.at(v, c), discrete);
        }
        out << '\n';
    }
}

Profile read_profile_csv(std::istream& in, std::optional<Scale> scale) {
    std::string line;
    if (!std::getline(in, line)) throw IoError("csv: empty input");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto header = split_line(line);
    if (header.size() < 2 || header[0] != "voter") {
        throw IoError("csv: header must be 'voter,<name_1>,...,<name_m>'");
    }
    std::vector<std::string> names(header.begin() + 1, header.end());
    const std::size_t m = names.size();

    std::vector<double> values;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != m + 1) {
            throw IoError("csv: row " + std::to_string(row) + " has " +
                          std::to_string(fields.size()) + " fields, expected " +
                          std::to_string(m + 1));
        }
        for (std::size_t c = 0; c < m; ++c) {
            values.push_back(parse_value(fields[c + 1], row, c + 2));
        }
    }
    if (values.empty()) throw IoError("csv: no data rows");
    const std::size_t n = values.size() / m;

    if (!scale) {
        bool all_integral = true;
        double max_value = 0.0;
        for (double v : values) {
            if (v != std::floor(v)) all_integral = false;
            max_value = std::max(max_value, v);
        }
        if (all_integral && max_value > 1.0) {
            scale = Scale::discrete(static_cast<int>(max_value));
        } else {
            scale = Scale::continuous();
        }
    }
    return validate_profile(std::move(values), n, *scale, std::move(names));
}

Profile read_profile_csv(const std::string& path, std::optional<Scale> scale) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return read_profile_csv(in, scale);
}

void write_positions_csv(const std::vector<std::vector<double>>& voter_positions,
                         const std::vector<std::vector<double>>& candidate_positions,
                         std::ostream& out) {
    const std::size_t dim = voter_positions.empty()
                                ? (candidate_positions.empty() ? 0 : candidate_positions[0].size())
                                : voter_positions[0].size();
    out << "point,kind";
    for (std::size_t k = 1; k <= dim; ++k) out << ",x_" << k;
    out << '\n';
    for (std::size_t v = 0; v < voter_positions.size(); ++v) {
        out << 'v' << (v + 1) << ",voter";
        for (double x : voter_positions[v]) out << ',' << format_value(x, false);
        out << '\n';
    }
    for (std::size_t c = 0; c < candidate_positions.size(); ++c) {
        out << 'c' << (c + 1) << ",candidate";
        for (double x : candidate_positions[c]) out << ',' << format_value(x, false);
        out << '\n';
    }
}

void write_positions_csv(const std::vector<std::vector<double>>& voter_positions,
                         const std::vector<std::vector<double>>& candidate_positions,
                         const std::string& path) {
    auto out = open_for_write(path);
    write_positions_csv(voter_positions, candidate_positions, out);
}

}  // namespace evalsim
