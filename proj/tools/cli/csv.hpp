#pragma once

#include <string>
#include <vector>

#include "pairab/dataset.hpp"

namespace pairab::cli {

// Reads `unit_id,y1,x1,y2,x2` rows. Empty or NA outcome fields are missing;
// design fields must parse to -1 or +1 (a trailing .0 is accepted). Throws
// MissingHeader / MalformedRow with the offending row and column named.
std::vector<UnitRecord> parse_csv(const std::string& path);

std::vector<UnitRecord> parse_csv_text(const std::string& text,
                                       const std::string& origin = "<string>");

// Inverse of parse_csv; outcomes are written with 17 significant digits so a
// round trip is exact.
std::string dataset_to_csv(const PairedDataset& ds);

}  // namespace pairab::cli
