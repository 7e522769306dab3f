#pragma once

#include <string>

#include "sscor/types.hpp"

namespace sscor {

/// Reads a delimited text file (commas and/or whitespace) into an n x 2
/// matrix built from the first two numeric columns. Blank lines and lines
/// starting with '#' are skipped; a leading header row is detected (fewer
/// than two numeric fields) and dropped. Throws CsvError with the 1-based
/// line number on malformed rows; requires at least two data rows.
SampleMatrix read_matrix_csv(const std::string& path);

}  // namespace sscor
