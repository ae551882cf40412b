#pragma once

#include <stdexcept>
#include <string>

#include "emff/sim_engine.hpp"

namespace emff {

struct CsvError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Header `t_s` then, per ordered pair (i,j) in telemetry order, the columns
/// q_m_i_j, r_hat_m_i_j, v_hat_mps_i_j, I_amp_A_i_j, F_hat_N_i_j.
/// Values are decimal text with 9 significant digits.
std::string telemetry_to_csv(const Telemetry& tel);

/// Inverse of telemetry_to_csv; recovers the pair list from the header.
/// Throws CsvError naming the offending line on malformed input.
Telemetry telemetry_from_csv(const std::string& text, const std::string& source_name);

void write_telemetry_csv(const Telemetry& tel, const std::string& path);
Telemetry read_telemetry_csv(const std::string& path);

} // namespace emff
