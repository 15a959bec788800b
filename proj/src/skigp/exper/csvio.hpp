#pragma once

#include <string>

#include "skigp/gp.hpp"

namespace skigp::exper {

/// Reads a two-column (t, y) CSV with a header row. Rows whose target cell
/// is NaN become the test split (the infill gaps); everything else is
/// training data. Malformed cells raise errors naming the row and column.
Dataset ingest_csv(const std::string& path);

/// Writes a dataset back out as t,y with NaN targets for the test split.
/// Values are printed with enough digits to round-trip bit-exactly.
void export_dataset(const Dataset& data, const std::string& path);

}  // namespace skigp::exper
