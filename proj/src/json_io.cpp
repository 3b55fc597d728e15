#include "sympla/json_io.hpp"

#include <iomanip>
#include <sstream>

namespace sympla {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

}  // namespace

Field fieldFromJson(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "field must be \"real\" or \"complex\"");
  std::string name = j.get<std::string>();
  if (name == "real") return Field::Real;
  if (name == "complex") return Field::Complex;
  fail(where, "unknown field \"" + name + "\"");
}

Complex scalarFromJson(const Json& j, Field field, const std::string& where) {
  if (j.is_number()) return Complex(j.get<double>(), 0.0);
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    Complex value(j[0].get<double>(), j[1].get<double>());
    if (field == Field::Real && value.imag() != 0.0) {
      fail(where, "real data cannot carry a nonzero imaginary part");
    }
    return value;
  }
  fail(where, "expected a number or an [re, im] pair");
}

Json scalarToJson(Complex value, Field field) {
  if (field == Field::Real) return Json(value.real());
  return Json::array({value.real(), value.imag()});
}

Mat matrixFromJson(const Json& j, Field field, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty array of rows");
  size_t cols = 0;
  for (const auto& row : j) {
    if (!row.is_array()) fail(where, "expected rows to be arrays");
    if (cols == 0) cols = row.size();
    if (row.size() != cols || cols == 0) fail(where, "ragged or empty matrix rows");
  }
  Mat m(static_cast<Index>(j.size()), static_cast<Index>(cols));
  for (size_t i = 0; i < j.size(); ++i) {
    for (size_t k = 0; k < cols; ++k) {
      m(static_cast<Index>(i), static_cast<Index>(k)) =
          scalarFromJson(j[i][k], field, where);
    }
  }
  return m;
}

Json matrixToJson(const Mat& m, Field field) {
  Json rows = Json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Index k = 0; k < m.cols(); ++k) row.push_back(scalarToJson(m(i, k), field));
    rows.push_back(std::move(row));
  }
  return rows;
}

Subspace subspaceFromJson(const Json& j, const std::string& where, double rank_rel) {
  if (!j.is_object()) fail(where, "expected a subspace object");
  if (!j.contains("ambient_dim") || !j["ambient_dim"].is_number_integer()) {
    fail(where, "missing integer \"ambient_dim\"");
  }
  Index d = j["ambient_dim"].get<Index>();
  if (d <= 0) fail(where, "ambient_dim must be positive");
  Field field = j.contains("field") ? fieldFromJson(j["field"], where) : Field::Real;
  if (!j.contains("basis") || !j["basis"].is_array()) {
    fail(where, "missing \"basis\" array of columns");
  }
  const Json& basis = j["basis"];
  Mat columns(d, static_cast<Index>(basis.size()));
  for (size_t c = 0; c < basis.size(); ++c) {
    const Json& col = basis[c];
    if (!col.is_array() || static_cast<Index>(col.size()) != d) {
      fail(where, "each basis column must list ambient_dim entries");
    }
    for (Index i = 0; i < d; ++i) {
      columns(i, static_cast<Index>(c)) = scalarFromJson(col[i], field, where);
    }
  }
  return Subspace::fromColumns(columns, field, rank_rel);
}

Json subspaceToJson(const Subspace& s) {
  Json out;
  out["ambient_dim"] = s.ambientDim();
  out["field"] = s.field() == Field::Real ? "real" : "complex";
  Json basis = Json::array();
  for (Index c = 0; c < s.dim(); ++c) {
    Json col = Json::array();
    for (Index i = 0; i < s.ambientDim(); ++i) {
      col.push_back(scalarToJson(s.basis()(i, c), s.field()));
    }
    basis.push_back(std::move(col));
  }
  out["basis"] = std::move(basis);
  return out;
}

SymplecticSpace spaceFromJson(const Json& j, const std::string& where,
                              double symplectic_rel) {
  if (!j.is_object()) fail(where, "expected a space object");
  Field field = j.contains("field") ? fieldFromJson(j["field"], where) : Field::Real;
  if (j.contains("form") && !j["form"].is_string()) {
    Mat omega = matrixFromJson(j["form"], field, where + ".form");
    return SymplecticSpace::fromForm(std::move(omega), field, symplectic_rel);
  }
  if (j.contains("form") && j["form"].get<std::string>() != "standard") {
    fail(where, "form must be \"standard\" or a matrix");
  }
  if (!j.contains("n") || !j["n"].is_number_integer()) {
    fail(where, "missing integer \"n\"");
  }
  Index n = j["n"].get<Index>();
  if (n <= 0) fail(where, "n must be positive");
  return SymplecticSpace::standard(n, field);
}

std::vector<PairSample> pairSamplesFromJson(const Json& j, const std::string& where,
                                            double rank_rel) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty sample array");
  std::vector<PairSample> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& item = j[i];
    std::string at = where + "[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("s") || !item["s"].is_number() ||
        !item.contains("lambda") || !item.contains("mu")) {
      fail(at, "expected {\"s\", \"lambda\", \"mu\"}");
    }
    PairSample ps;
    ps.s = item["s"].get<double>();
    ps.lambda = subspaceFromJson(item["lambda"], at + ".lambda", rank_rel);
    ps.mu = subspaceFromJson(item["mu"], at + ".mu", rank_rel);
    out.push_back(std::move(ps));
  }
  return out;
}

std::vector<SplitSample> splitSamplesFromJson(const Json& j, const std::string& where,
                                              double rank_rel) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty sample array");
  std::vector<SplitSample> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& item = j[i];
    std::string at = where + "[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("s") || !item["s"].is_number() ||
        !item.contains("X") || !item.contains("Y") || !item.contains("lambda") ||
        !item.contains("mu")) {
      fail(at, "expected {\"s\", \"X\", \"Y\", \"lambda\", \"mu\"}");
    }
    SplitSample ss;
    ss.s = item["s"].get<double>();
    ss.X = subspaceFromJson(item["X"], at + ".X", rank_rel);
    ss.Y = subspaceFromJson(item["Y"], at + ".Y", rank_rel);
    ss.lambda = subspaceFromJson(item["lambda"], at + ".lambda", rank_rel);
    ss.mu = subspaceFromJson(item["mu"], at + ".mu", rank_rel);
    out.push_back(std::move(ss));
  }
  return out;
}

std::vector<MatrixSample> matrixSamplesFromJson(const Json& j, Field field,
                                                const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where, "expected a nonempty sample array");
  std::vector<MatrixSample> out;
  out.reserve(j.size());
  for (size_t i = 0; i < j.size(); ++i) {
    const Json& item = j[i];
    std::string at = where + "[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("s") || !item["s"].is_number() ||
        !item.contains("m")) {
      fail(at, "expected {\"s\", \"m\"}");
    }
    MatrixSample ms;
    ms.s = item["s"].get<double>();
    ms.m = matrixFromJson(item["m"], field, at + ".m");
    out.push_back(std::move(ms));
  }
  return out;
}

MorseData morseDataFromJson(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected a job object");
  MorseData data;
  data.field = j.contains("field") ? fieldFromJson(j["field"], where) : Field::Real;
  if (!j.contains("a")) fail(where, "missing frame matrix \"a\"");
  data.a = matrixFromJson(j["a"], data.field, where + ".a");
  if (!j.contains("samples") || !j["samples"].is_array() || j["samples"].empty()) {
    fail(where, "missing \"samples\" array");
  }
  const Json& samples = j["samples"];
  for (size_t i = 0; i < samples.size(); ++i) {
    const Json& item = samples[i];
    std::string at = where + ".samples[" + std::to_string(i) + "]";
    if (!item.is_object() || !item.contains("t") || !item["t"].is_number() ||
        !item.contains("p") || !item.contains("q") || !item.contains("r")) {
      fail(at, "expected {\"t\", \"p\", \"q\", \"r\"}");
    }
    data.t.push_back(item["t"].get<double>());
    data.p.push_back(matrixFromJson(item["p"], data.field, at + ".p"));
    data.q.push_back(matrixFromJson(item["q"], data.field, at + ".q"));
    data.r.push_back(matrixFromJson(item["r"], data.field, at + ".r"));
  }
  return data;
}

std::uint64_t fnv1aDigest(const std::string& text) {
  std::uint64_t hash = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 0x00000100000001b3ull;
  }
  return hash;
}

std::string digestString(const std::string& text) {
  std::ostringstream out;
  out << std::hex << std::setw(16) << std::setfill('0') << fnv1aDigest(text);
  return out.str();
}

}  // namespace sympla
