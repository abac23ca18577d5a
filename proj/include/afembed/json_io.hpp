#pragma once

#include <json.hpp>
#include <string>

#include "afembed/block.hpp"
#include "afembed/bratteli.hpp"
#include "afembed/cpmaps.hpp"
#include "afembed/dimension.hpp"
#include "afembed/matrix.hpp"
#include "afembed/ultrasim.hpp"

// JSON forms used by the command line tool and the fixtures:
//   integers      number when they fit in 64 bits, decimal string otherwise
//   complex       [re, im], plain numbers accepted on input as reals
//   Mat           array of rows of complex entries
//   BlockMatrix   {"dims": [...], "blocks": [Mat, ...]}
//   algebra       {"dims": [...]} (a bare array is accepted on input)
//   MappingMatrix array of rows of integers
//   chain         {"algebras": [...], "inclusions": [MappingMatrix, ...]}
//   CP map        {"source_dim": n, "target_dims": [...], "choi": Mat}
//   family        {"algebras": [...], "window": w}
//   element       {"declared_bound": b, "terms": [BlockMatrix, ...]}
// All parsers throw ParseError with a contextual message on malformed input.
namespace afembed::jsonio {

using json = nlohmann::json;

json load_file(const std::string& path);

json to_json(const Int& v);
Int int_from_json(const json& j, const char* what);

json to_json(const DimensionVector& v);
DimensionVector dims_from_json(const json& j);

json to_json(const MappingMatrix& m);
MappingMatrix mapping_from_json(const json& j);

json to_json(const BratteliChain& c);
BratteliChain chain_from_json(const json& j);

json to_json(const MatrixSequence& s);

json to_json(const Mat& m);
Mat mat_from_json(const json& j);

json to_json(const BlockMatrix& b);
BlockMatrix block_from_json(const json& j);

json to_json(const CpMap& m);
CpMap cpmap_from_json(const json& j);

json to_json(const IndexedFamily& f);
IndexedFamily family_from_json(const json& j);

json to_json(const UltraElement& x);
UltraElement element_from_json(const json& j);

}  // namespace afembed::jsonio
