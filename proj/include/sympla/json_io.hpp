#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "sympla/maslov.hpp"
#include "sympla/morse_oracle.hpp"
#include "sympla/relations.hpp"
#include "sympla/spgroup.hpp"
#include "sympla/subspace.hpp"
#include "sympla/symplectic.hpp"
#include "sympla/triangular.hpp"
#include "sympla/types.hpp"

namespace sympla {

using Json = nlohmann::json;

// Scalar entries are plain numbers for real data and [re, im] pairs for
// complex data; both encodings are accepted on input for either field.
Complex scalarFromJson(const Json& j, Field field, const std::string& where);
Json scalarToJson(Complex value, Field field);

// Matrices are stored as arrays of rows.
Mat matrixFromJson(const Json& j, Field field, const std::string& where);
Json matrixToJson(const Mat& m, Field field);

// {"ambient_dim": d, "field": "real"|"complex", "basis": [columns]}
Subspace subspaceFromJson(const Json& j, const std::string& where,
                          double rank_rel = Tolerances{}.rank_rel);
Json subspaceToJson(const Subspace& s);

// {"n": n, "field": ..., "form": "standard"} or an explicit 2n x 2n matrix
// under "form".
SymplecticSpace spaceFromJson(const Json& j, const std::string& where,
                              double symplectic_rel = Tolerances{}.symplectic_rel);

Field fieldFromJson(const Json& j, const std::string& where);

std::vector<PairSample> pairSamplesFromJson(const Json& j, const std::string& where,
                                            double rank_rel = Tolerances{}.rank_rel);
std::vector<SplitSample> splitSamplesFromJson(const Json& j, const std::string& where,
                                              double rank_rel = Tolerances{}.rank_rel);
std::vector<MatrixSample> matrixSamplesFromJson(const Json& j, Field field,
                                                const std::string& where);

MorseData morseDataFromJson(const Json& j, const std::string& where);

// FNV-1a 64-bit digest of the raw input text, reported as 16 hex digits.
std::uint64_t fnv1aDigest(const std::string& text);
std::string digestString(const std::string& text);

}  // namespace sympla
