#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "risdmac/config.hpp"
#include "risdmac/validation.hpp"

namespace risdmac {

using Cell = std::variant<std::int64_t, double, std::string>;

// Row-oriented result of a subcommand. CSV is the primary rendering; JSON
// is an array of objects keyed by column name with the same values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

/// Throws NumericalError if any double cell is NaN or infinite.
void write_table(const Table& table, OutputFormat format, std::ostream& out);

/// Columns m,vertex_index,r1_bps_hz,r2_bps_hz,mode; one block per M.
Table cmd_region(const RunConfig& cfg);

/// Columns m,gamma_tilde_db,op_closed,op_mc,mc_halfwidth,abs_diff. Runs the
/// gamma_tilde_1 sweep when one is configured, else the configured point.
Table cmd_outage(const RunConfig& cfg);

/// Like cmd_outage for any supported sweep parameter; the second column is
/// named after the parameter.
Table cmd_sweep(const RunConfig& cfg);

/// Columns m,user,g,cdf_closed,cdf_quadrature,abs_diff on 100 points
/// spanning (0, 20 E[gamma]].
Table cmd_dist_check(const RunConfig& cfg);

/// Columns check,status,value,threshold,note.
Table validation_table(const ValidationReport& report);

/// Writes `table` to cfg.output_path ("-" is stdout) in cfg.format.
void emit(const Table& table, const RunConfig& cfg, std::ostream& stdout_stream);

}  // namespace risdmac
