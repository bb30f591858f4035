#ifndef EVALSIM_CSV_HPP_
#define EVALSIM_CSV_HPP_

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evalsim/profile.hpp"

namespace evalsim {

// Profile CSV: UTF-8, comma delimiter, LF endings. Header row
// `voter,<name_1>,...,<name_m>`; data rows `v<i>` then m values.
// Continuous values carry 17 significant digits, discrete ones print
// as bare integers. Byte-stable: write(read(write(p))) == write(p).
void write_profile_csv(const Profile& profile, std::ostream& out);
void write_profile_csv(const Profile& profile, const std::string& path);

// Paper-package orientation: candidates in rows, voters in columns.
void write_profile_csv_transposed(const Profile& profile, std::ostream& out);

// Reads a profile; when no scale is given: all-integer values with a
// maximum above 1 load as discrete with K = max, anything else as
// continuous. Throws IoError with row/column diagnostics on malformed
// input and ValidationError on out-of-scale values.
Profile read_profile_csv(std::istream& in, std::optional<Scale> scale = std::nullopt);
Profile read_profile_csv(const std::string& path, std::optional<Scale> scale = std::nullopt);

// Positions CSV: header `point,kind,x_1,...,x_d`, kind in {voter,candidate}.
void write_positions_csv(const std::vector<std::vector<double>>& voter_positions,
                         const std::vector<std::vector<double>>& candidate_positions,
                         std::ostream& out);
void write_positions_csv(const std::vector<std::vector<double>>& voter_positions,
                         const std::vector<std::vector<double>>& candidate_positions,
                         const std::string& path);

// 17-significant-digit representation used across all CSV output.
std::string format_value(double value, bool discrete);

}  // namespace evalsim

#endif  // EVALSIM_CSV_HPP_
