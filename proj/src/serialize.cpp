#include "karoubi/serialize.hpp"

#include <fstream>

namespace karoubi::serialize {

namespace {

const char* kVectorization = "block-row-major";
const char* kChoiLayout = "dom-tensor-cod";

std::vector<int> dims_from_json(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_object() || !j[key].contains("dims"))
    fail("ConventionError", std::string("missing \"") + key + "\" system description");
  std::vector<int> dims;
  for (const auto& d : j[key]["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      fail("ShapeError", "system dims must be positive integers");
    dims.push_back(d.get<int>());
  }
  if (dims.empty()) fail("ShapeError", "system dims must be nonempty");
  return dims;
}

void check_convention(const Json& j) {
  if (!j.contains("convention")) fail("ConventionError", "missing \"convention\" field");
  const Json& c = j["convention"];
  if (!c.contains("vectorization") || c["vectorization"] != kVectorization)
    fail("ConventionError", "convention.vectorization must be \"block-row-major\"");
  if (!c.contains("choi") || c["choi"] != kChoiLayout)
    fail("ConventionError", "convention.choi must be \"dom-tensor-cod\"");
}

Json convention_json() {
  Json c;
  c["vectorization"] = kVectorization;
  c["choi"] = kChoiLayout;
  return c;
}

quant::Channel channel_from_payload(const Json& j, const std::string& repr,
                                    const quant::CompositeSystem& dom,
                                    const quant::CompositeSystem& cod, Tolerance tol) {
  if (repr == "superop") {
    const CMat s = cmat_from_json(j["superop"]);
    if (s.rows() != cod.coord_dim() || s.cols() != dom.coord_dim())
      fail("ShapeError", "superop shape does not match dims");
    return quant::Channel(dom, cod, s);
  }
  if (repr == "choi") {
    return quant::Channel::from_choi(cmat_from_json(j["choi"]), dom, cod, tol);
  }
  if (repr == "kraus") {
    quant::KrausSet ks;
    for (const auto& k : j["kraus"]) ks.ops.push_back(cmat_from_json(k));
    return quant::Channel::from_kraus(ks, dom, cod);
  }
  fail("ConventionError", "repr must be one of \"choi\", \"kraus\", \"superop\"");
}

}  // namespace

Json cmat_to_json(const CMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMat cmat_from_json(const Json& j) {
  if (!j.is_array()) fail("ParseError", "complex matrix must be an array of rows");
  const int rows = int(j.size());
  const int cols = rows ? int(j[0].size()) : 0;
  CMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(j[i].size()) != cols) fail("ShapeError", "ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const Json& e = j[i][c];
      if (!e.is_array() || e.size() != 2)
        fail("ParseError", "complex entries must be [re, im] pairs");
      m(i, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

Json rmat_to_json(const RMat& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RMat rmat_from_json(const Json& j) {
  if (!j.is_array()) fail("ParseError", "matrix must be an array of rows");
  const int rows = int(j.size());
  const int cols = rows ? int(j[0].size()) : 0;
  RMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(j[i].size()) != cols) fail("ShapeError", "ragged matrix rows");
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

Json bool_matrix_to_json(const mat::BoolMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(int(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

mat::BoolMatrix bool_matrix_from_json(const Json& j) {
  if (!j.is_array()) fail("ParseError", "boolean matrix must be an array of rows");
  const int rows = int(j.size());
  const int cols = rows ? int(j[0].size()) : 0;
  mat::BoolMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (int(j[i].size()) != cols) fail("ShapeError", "ragged matrix rows");
    for (int c = 0; c < cols; ++c) {
      const int v = j[i][c].get<int>();
      if (v != 0 && v != 1) fail("ShapeError", "boolean entries must be 0 or 1");
      m.set(i, c, v == 1);
    }
  }
  return m;
}

ParsedInput parse_morphism_json(const Json& j, Tolerance tol) {
  ParsedInput out;
  if (j.contains("semiring")) {
    const std::string kind = j["semiring"].get<std::string>();
    if (!j.contains("matrix")) fail("ConventionError", "matrix payload missing");
    if (kind == "boolean") {
      out.mat_morphism = mat::bool_mor(mat::frel_theory(), bool_matrix_from_json(j["matrix"]));
    } else if (kind == "nonneg-real") {
      out.mat_morphism = mat::real_mor(mat::class_theory(), rmat_from_json(j["matrix"]));
    } else {
      fail("ConventionError", "semiring must be \"boolean\" or \"nonneg-real\"");
    }
    return out;
  }
  if (!j.contains("repr")) fail("ConventionError", "missing \"repr\" tag");
  check_convention(j);
  const std::string repr = j["repr"].get<std::string>();
  const quant::CompositeSystem dom(dims_from_json(j, "dom"));
  const quant::CompositeSystem cod(dims_from_json(j, "cod"));
  if (!j.contains(repr)) fail("ConventionError", "payload for declared repr is missing");
  quant::Channel c = channel_from_payload(j, repr, dom, cod, tol);
  // Cross-validate a secondary representation when present.
  for (const std::string other : {std::string("superop"), std::string("choi")}) {
    if (other != repr && j.contains(other)) {
      const quant::Channel c2 = channel_from_payload(j, other, dom, cod, tol);
      if (c.distance(c2) > std::max(tol.eps, 1e-9))
        fail("ShapeError", "choi and superop payloads disagree");
    }
  }
  out.channel = std::move(c);
  return out;
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("ParseError", "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail("ParseError", std::string("malformed JSON: ") + e.what());
  }
  return j;
}

ParsedInput parse_morphism_file(const std::string& path, Tolerance tol) {
  return parse_morphism_json(load_json_file(path), tol);
}

Json channel_to_json(const quant::Channel& c, const std::string& repr) {
  Json j;
  j["dom"] = Json{{"dims", c.dom().dims()}};
  j["cod"] = Json{{"dims", c.cod().dims()}};
  j["repr"] = repr;
  j["convention"] = convention_json();
  if (repr == "superop") {
    j["superop"] = cmat_to_json(c.superop());
  } else if (repr == "choi") {
    j["choi"] = cmat_to_json(c.choi());
  } else {
    fail("ConventionError", "serialisation supports \"superop\" and \"choi\"");
  }
  return j;
}

Json report_to_json(const decompose::DecompositionReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    Json e;
    e["check"] = c.name;
    e["residual"] = c.residual;
    e["pass"] = c.pass;
    checks.push_back(std::move(e));
  }
  Json j;
  j["checks"] = std::move(checks);
  j["max_residual"] = report.max_residual;
  j["pass"] = report.pass;
  return j;
}

Json decomposition_to_json(const decompose::BlockDecomposition& dec,
                           const decompose::DecompositionReport* report) {
  Json j;
  j["system"] = Json{{"dims", dec.q.dom().dims()}};
  Json blocks = Json::array();
  for (const auto& blk : dec.blocks) {
    Json b;
    b["dimA"] = blk.dim_a;
    b["dimB"] = blk.dim_b;
    b["rank_tau"] = blk.tau_rank;
    b["tau"] = cmat_to_json(blk.tau);
    b["m"] = cmat_to_json(blk.m.superop());
    b["e"] = cmat_to_json(blk.e.superop());
    blocks.push_back(std::move(b));
  }
  j["blocks"] = std::move(blocks);
  j["basis"] = cmat_to_json(dec.basis);
  j["residual_dim"] = dec.residual_dim;
  j["q"] = cmat_to_json(dec.q.superop());
  if (report) j["residuals"] = report_to_json(*report);
  return j;
}

decompose::BlockDecomposition decomposition_from_json(const Json& j) {
  const quant::CompositeSystem ambient(dims_from_json(j, "system"));
  decompose::BlockDecomposition dec{{},
                                    cmat_from_json(j["basis"]),
                                    j["residual_dim"].get<int>(),
                                    quant::Channel::zero(ambient, ambient),
                                    quant::Channel::zero(ambient, ambient),
                                    quant::Channel::zero(ambient, ambient)};
  std::vector<int> adims;
  for (const auto& b : j["blocks"]) {
    decompose::Block blk;
    blk.dim_a = b["dimA"].get<int>();
    blk.dim_b = b["dimB"].get<int>();
    blk.tau_rank = b["rank_tau"].get<int>();
    blk.tau = cmat_from_json(b["tau"]);
    blk.m = quant::Channel(quant::CompositeSystem({blk.dim_a}), ambient, cmat_from_json(b["m"]));
    blk.e = quant::Channel(ambient, quant::CompositeSystem({blk.dim_a}), cmat_from_json(b["e"]));
    adims.push_back(blk.dim_a);
    dec.blocks.push_back(std::move(blk));
  }
  if (adims.empty()) fail("ShapeError", "a decomposition needs at least one block");
  const quant::CompositeSystem splitter(adims);
  CMat split_m = CMat::Zero(ambient.coord_dim(), splitter.coord_dim());
  CMat split_e = CMat::Zero(splitter.coord_dim(), ambient.coord_dim());
  for (size_t k = 0; k < dec.blocks.size(); ++k) {
    const int a = dec.blocks[k].dim_a;
    split_m.middleCols(splitter.block_offset(int(k)), a * a) = dec.blocks[k].m.superop();
    split_e.middleRows(splitter.block_offset(int(k)), a * a) = dec.blocks[k].e.superop();
  }
  dec.split_m = quant::Channel(splitter, ambient, split_m);
  dec.split_e = quant::Channel(ambient, splitter, split_e);
  dec.q = quant::Channel::zero(ambient, ambient);
  for (const auto& blk : dec.blocks) dec.q = dec.q.plus(blk.m.compose(blk.e));
  return dec;
}

Json frobenius_to_json(const leaks::FrobeniusStructure& fs) {
  Json j;
  j["dim"] = fs.dim;
  j["delta"] = cmat_to_json(fs.delta);
  return j;
}

leaks::FrobeniusStructure frobenius_from_json(const Json& j) {
  if (!j.contains("dim") || !j.contains("delta"))
    fail("ConventionError", "a Frobenius structure needs \"dim\" and \"delta\"");
  leaks::FrobeniusStructure fs{j["dim"].get<int>(), cmat_from_json(j["delta"])};
  if (fs.delta.rows() != fs.dim * fs.dim || fs.delta.cols() != fs.dim)
    fail("ShapeError", "delta must be a d^2 x d matrix");
  return fs;
}

}  // namespace karoubi::serialize
