#pragma once

#include "pmcvol/io/json_io.hpp"

#include <span>
#include <string>

namespace pmcvol::io {

/// Two markdown tables (normalized and original scale), model rows by instrument columns,
/// "mean ± half-width" cells. Rows are grouped into blocks by base model with HMC last;
/// the lowest mean of each block and column is bold.
std::string markdown_tables(std::span<const ReportRow> rows);

}  // namespace pmcvol::io
