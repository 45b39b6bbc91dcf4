#include "karoubi/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "karoubi/constructions.hpp"
#include "karoubi/decompose.hpp"
#include "karoubi/laws.hpp"
#include "karoubi/leaks.hpp"
#include "karoubi/serialize.hpp"

namespace karoubi::cli {

namespace {

using quant::Channel;
using serialize::Json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

int exit_code_for(const Error& e) {
  const std::string& c = e.code();
  if (c == "ParseError" || c == "ShapeError" || c == "ConventionError" || c == "UsageError" ||
      c == "BadTolerance")
    return kExitUsage;
  if (c == "NumericalFailure") return kExitNumerical;
  return kExitCheckFailure;
}

std::string yesno(bool b) { return b ? "yes" : "no"; }

void emit(std::ostream& out, bool as_json, const Json& j, const std::string& text) {
  if (as_json)
    out << j.dump(2) << "\n";
  else
    out << text;
}

Json load_inline_or_file(const std::string& inline_text, const std::string& path) {
  if (!inline_text.empty()) {
    try {
      return Json::parse(inline_text);
    } catch (const std::exception& e) {
      fail("ParseError", std::string("malformed inline JSON: ") + e.what());
    }
  }
  if (path.empty()) fail("UsageError", "provide --in FILE or an inline payload");
  return serialize::load_json_file(path);
}

serialize::ParsedInput parse_input(const std::string& path, Tolerance tol) {
  if (path.empty()) fail("UsageError", "missing --in FILE");
  return serialize::parse_morphism_file(path, tol);
}

Mor as_theory_morphism(const serialize::ParsedInput& in) {
  if (in.is_channel()) return quant::quant_mor(*in.channel);
  return *in.mat_morphism;
}

std::string block_summary(const decompose::BlockDecomposition& dec) {
  std::ostringstream os;
  os << dec.blocks.size() << " block" << (dec.blocks.size() == 1 ? "" : "s") << ":";
  for (size_t i = 0; i < dec.blocks.size(); ++i)
    os << (i ? "," : "") << " " << dec.blocks[i].dim_a << "x(tau rank " << dec.blocks[i].tau_rank
       << ")";
  if (dec.residual_dim > 0) os << "; residual subspace dim " << dec.residual_dim;
  return os.str();
}

// ------------------------------- check ---------------------------------------

int cmd_check(const std::string& in_path, const std::string& dec_path, double tol_eps,
              bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  const auto input = parse_input(in_path, tol);

  if (!dec_path.empty()) {
    if (!input.is_channel()) fail("UsageError", "--verify-decomposition needs a channel input");
    const auto dec = serialize::decomposition_from_json(serialize::load_json_file(dec_path));
    const auto report = verify_decomposition(*input.channel, dec, tol);
    std::ostringstream text;
    for (const auto& c : report.checks)
      text << (c.pass ? "pass" : "FAIL") << "  " << c.name << "  (residual " << c.residual
           << ")\n";
    text << (report.pass ? "decomposition verified\n" : "decomposition NOT verified\n");
    emit(out, as_json, serialize::report_to_json(report), text.str());
    return report.pass ? kExitPass : kExitCheckFailure;
  }

  Json j;
  bool all = true;
  std::ostringstream text;
  const Mor m = as_theory_morphism(input);
  const Theory& t = m.theory();
  const bool endo = t.obj_equal(m.dom(), m.cod());
  if (input.is_channel()) {
    const auto checks = validate_channel(*input.channel, tol);
    j["cp"] = checks.cp;
    j["tp"] = checks.tp;
    j["subcausal"] = checks.subcausal;
    j["choi_min_eig"] = checks.choi_min_eig;
    j["tp_residual"] = checks.tp_residual;
    text << "cp         " << yesno(checks.cp) << "\n";
    text << "tp         " << yesno(checks.tp) << "\n";
    text << "subcausal  " << yesno(checks.subcausal) << "\n";
    all = all && checks.cp && checks.tp && checks.subcausal;
  } else {
    const bool sub = is_subcausal(m, tol);
    j["subcausal"] = sub;
    text << "subcausal  " << yesno(sub) << "\n";
    all = all && sub;
  }
  const bool causal = is_causal(m, tol);
  j["causal"] = causal;
  text << "causal     " << yesno(causal) << "\n";
  all = all && causal;
  if (endo) {
    const bool idem = is_idempotent(m, tol);
    j["idempotent"] = idem;
    text << "idempotent " << yesno(idem) << "\n";
    all = all && idem;
  }
  j["pass"] = all;
  emit(out, as_json, j, text.str());
  return all ? kExitPass : kExitCheckFailure;
}

// ------------------------------- split ---------------------------------------

int cmd_split(const std::string& in_path, double tol_eps, bool as_json,
              const std::string& out_path, std::ostream& out) {
  const Tolerance tol{tol_eps};
  const auto input = parse_input(in_path, tol);
  if (!input.is_channel()) fail("UsageError", "split expects a quantum channel input");
  const auto dec = decompose::decompose_cptp_idempotent(*input.channel, tol);
  const auto report = verify_decomposition(*input.channel, dec, tol);
  const Json j = serialize::decomposition_to_json(dec, &report);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) fail("UsageError", "cannot write " + out_path);
    f << j.dump(2) << "\n";
  }
  std::ostringstream text;
  text << block_summary(dec) << "\n";
  text << "verification " << (report.pass ? "pass" : "FAIL") << " (max residual "
       << report.max_residual << ")\n";
  emit(out, as_json, j, text.str());
  return report.pass ? kExitPass : kExitCheckFailure;
}

// ------------------------------- flor ----------------------------------------

int cmd_flor(const std::string& in_path, const std::string& inline_p, double tol_eps,
             bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  Json payload = load_inline_or_file(inline_p, in_path);
  RMat p;
  if (payload.is_array())
    p = serialize::rmat_from_json(payload);
  else if (payload.contains("matrix"))
    p = serialize::rmat_from_json(payload["matrix"]);
  else
    fail("ConventionError", "flor expects a nonnegative matrix payload");
  const auto dec = decompose::flor_decompose(p, tol);

  double biorth = 0.0, recon = 0.0;
  RMat sum = RMat::Zero(p.rows(), p.cols());
  for (size_t i = 0; i < dec.pairs.size(); ++i) {
    sum += dec.pairs[i].first * dec.pairs[i].second.transpose();
    for (size_t jj = 0; jj < dec.pairs.size(); ++jj)
      biorth = std::max(biorth, std::abs(dec.pairs[jj].second.dot(dec.pairs[i].first) -
                                         (i == jj ? 1.0 : 0.0)));
  }
  if (p.size() > 0) recon = (sum - p).cwiseAbs().maxCoeff();

  Json j;
  j["rank"] = dec.pairs.size();
  Json pairs = Json::array();
  for (const auto& [u, v] : dec.pairs) {
    Json e;
    e["u"] = serialize::rmat_to_json(u);
    e["v"] = serialize::rmat_to_json(v.transpose());
    pairs.push_back(std::move(e));
  }
  j["pairs"] = std::move(pairs);
  j["biorthogonality_residual"] = biorth;
  j["reconstruction_residual"] = recon;
  const bool pass = biorth <= tol.eps && recon <= tol.eps;
  j["pass"] = pass;
  std::ostringstream text;
  text << dec.pairs.size() << " rank-one pair" << (dec.pairs.size() == 1 ? "" : "s")
       << "; biorthogonality residual " << biorth << ", reconstruction residual " << recon
       << "\n";
  emit(out, as_json, j, text.str());
  return pass ? kExitPass : kExitCheckFailure;
}

// ------------------------------ relsearch ------------------------------------

std::string grid(const mat::BoolMatrix& m) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) os << int(m(i, j));
    os << "\n";
  }
  return os.str();
}

int cmd_relsearch(const std::string& in_path, const std::string& inline_p, int b_max,
                  bool as_json, std::ostream& out) {
  Json payload = load_inline_or_file(inline_p, in_path);
  mat::BoolMatrix p;
  if (payload.is_array())
    p = serialize::bool_matrix_from_json(payload);
  else if (payload.contains("matrix"))
    p = serialize::bool_matrix_from_json(payload["matrix"]);
  else
    fail("ConventionError", "relsearch expects a boolean matrix payload");

  const Mor pm = mat::bool_mor(mat::frel_theory(), p);
  const bool causal = is_causal(pm, Tolerance{0.0});
  const auto found = decompose::search_splitting_bool(p, b_max);

  Json j;
  j["idempotent"] = true;  // non-idempotents are rejected with an error
  j["causal"] = causal;
  j["max_dim"] = b_max;
  std::ostringstream text;
  text << "idempotent yes, causal " << yesno(causal) << "\n";
  if (found) {
    j["split_found"] = true;
    j["b"] = found->e.rows();
    j["m"] = serialize::bool_matrix_to_json(found->m);
    j["e"] = serialize::bool_matrix_to_json(found->e);
    text << "splitting found through dim " << found->e.rows() << "\nm =\n"
         << grid(found->m) << "e =\n"
         << grid(found->e);
  } else {
    j["split_found"] = false;
    text << "no splitting up to dim " << b_max << "\n";
  }
  emit(out, as_json, j, text.str());
  return kExitPass;
}

// ------------------------------ causalize ------------------------------------

int cmd_causalize(const std::string& in_path, double tol_eps, bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  const auto input = parse_input(in_path, tol);
  if (!input.is_channel()) fail("UsageError", "causalize expects a quantum channel input");
  const Mor p = quant::quant_mor(*input.channel);
  const Mor a = causalize_witness_state(p, tol);
  const Mor q = causalize_subcausal(p, a, tol);
  const Channel& qc = quant::channel_payload(q);

  const auto checks = validate_channel(qc, tol);
  const auto dec = decompose::decompose_cptp_idempotent(qc, tol);
  const auto report = verify_decomposition(qc, dec, tol);

  Json j;
  j["repaired"] = serialize::channel_to_json(qc);
  j["cp"] = checks.cp;
  j["tp"] = checks.tp;
  j["decomposition"] = serialize::decomposition_to_json(dec, &report);
  const bool pass = checks.cp && checks.tp && report.pass;
  j["pass"] = pass;
  std::ostringstream text;
  text << "repaired idempotent: cp " << yesno(checks.cp) << ", tp " << yesno(checks.tp) << "\n";
  text << block_summary(dec) << "\n";
  text << "verification " << (report.pass ? "pass" : "FAIL") << " (max residual "
       << report.max_residual << ")\n";
  emit(out, as_json, j, text.str());
  return pass ? kExitPass : kExitCheckFailure;
}

// -------------------------------- leak ---------------------------------------

int cmd_leak(const std::string& in_path, const std::string& kind, int broadcast_n,
             const std::string& theory_name, double tol_eps, bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  Json j;
  std::ostringstream text;
  bool pass = true;

  if (broadcast_n > 0) {
    std::shared_ptr<const Theory> theory;
    if (theory_name == "frel")
      theory = mat::frel_theory();
    else if (theory_name == "class")
      theory = mat::class_theory();
    else if (theory_name == "quant")
      theory = quant::quant_theory();
    else
      fail("UsageError", "--theory must be frel, class or quant");
    const auto lc = leaks::broadcasting_map(theory, broadcast_n);
    const bool right = leaks::is_leak(lc, tol);
    const bool left = leaks::has_left_counit(lc, tol);
    j["kind"] = "broadcast";
    j["right_counit"] = right;
    j["left_counit"] = left;
    pass = right && left;
    text << "broadcasting map on " << broadcast_n << ": right counit " << yesno(right)
         << ", left counit " << yesno(left) << "\n";
  } else {
    const auto input = parse_input(in_path, tol);
    const Mor p = as_theory_morphism(input);
    if (kind == "trivial") {
      const auto lc = leaks::leak_from_idempotent_trivial(p, tol);
      const Mor iota = leaks::idempotent_from_leakage(lc, tol);
      const double round_trip = p.theory().distance(iota, p);
      j["kind"] = "trivial";
      j["round_trip_residual"] = round_trip;
      pass = round_trip <= 1e-12;
      text << "trivial leak round trip residual " << round_trip << "\n";
    } else if (kind == "stinespring") {
      if (!input.is_channel()) fail("UsageError", "stinespring leaks need a quantum channel");
      const Channel& pc = *input.channel;
      const auto lc = leaks::stinespring_leak(pc, tol);
      const Theory& t = lc.l.theory();
      const Mor iota = t.compose(t.tensor(t.identity(lc.system), t.discard(lc.env)), lc.l);
      const Mor pm = quant::quant_mor(pc);
      const double recover = t.distance(iota, pm);
      const double sandwich = t.distance(t.compose(pm, t.compose(iota, pm)), pm);
      const int env_dim = quant::channel_payload(lc.l).cod().total_dim() / pc.dom().total_dim();
      j["kind"] = "stinespring";
      j["env_dim"] = env_dim;
      j["recover_residual"] = recover;
      j["sandwich_residual"] = sandwich;
      pass = recover <= tol.eps && sandwich <= tol.eps;
      text << "stinespring leak with environment dim " << env_dim << "\n";
      text << "(id (x) discard) . l = p residual " << recover << "\n";
      text << "p . iota . p = p residual " << sandwich << "\n";
    } else {
      fail("UsageError", "--kind must be stinespring or trivial (or use --broadcast)");
    }
  }
  j["pass"] = pass;
  emit(out, as_json, j, text.str());
  return pass ? kExitPass : kExitCheckFailure;
}

// ------------------------------ frobenius ------------------------------------

int cmd_frobenius(const std::string& in_path, int copy_n, int pants_n, double tol_eps,
                  bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  leaks::FrobeniusStructure fs;
  if (copy_n > 0)
    fs = leaks::copy_delta(copy_n);
  else if (pants_n > 0)
    fs = leaks::pants_delta(pants_n);
  else {
    if (in_path.empty()) fail("UsageError", "provide --in FILE, --copy N or --pants N");
    fs = serialize::frobenius_from_json(serialize::load_json_file(in_path));
  }

  const auto rep = verify_frobenius(fs, tol);
  Json j;
  j["coassoc_residual"] = rep.coassoc_residual;
  j["frobenius_residual"] = rep.frobenius_residual;
  j["special_residual"] = rep.special_residual;
  std::ostringstream text;
  text << "coassociativity residual " << rep.coassoc_residual << " ("
       << (rep.coassoc ? "pass" : "FAIL") << ")\n";
  text << "frobenius law residual   " << rep.frobenius_residual << " ("
       << (rep.frobenius_law ? "pass" : "FAIL") << ")\n";
  text << "speciality residual      " << rep.special_residual << " ("
       << (rep.special ? "pass" : "FAIL") << ")\n";
  bool pass = rep.coassoc && rep.frobenius_law && rep.special;

  if (rep.special) {
    const Channel deco = leaks::decoherence_idempotent(fs, tol);
    const Mor dm = quant::quant_mor(deco);
    const bool causal = is_causal(dm, tol);
    const bool idem = is_idempotent(dm, tol);
    const bool dagger = deco.adjoint().approx_eq(deco, tol);
    const auto dec = decompose::decompose_cptp_idempotent(deco, tol);
    const auto report = verify_decomposition(deco, dec, tol);
    j["decoherence"] = Json{{"causal", causal},
                            {"idempotent", idem},
                            {"dagger_idempotent", dagger},
                            {"decomposition", serialize::decomposition_to_json(dec, &report)}};
    text << "decoherence idempotent: causal " << yesno(causal) << ", idempotent " << yesno(idem)
         << ", self-adjoint " << yesno(dagger) << "\n";
    text << block_summary(dec) << "\n";
    pass = pass && causal && idem && dagger && report.pass;
  }
  j["pass"] = pass;
  emit(out, as_json, j, text.str());
  return pass ? kExitPass : kExitCheckFailure;
}

// -------------------------------- laws ---------------------------------------

std::shared_ptr<const Theory> theory_by_name(const std::string& name) {
  if (name == "frel") return mat::frel_theory();
  if (name == "class") return mat::class_theory();
  if (name == "quant") return quant::quant_theory();
  fail("UsageError", "--theory must be frel, class or quant");
}

Json law_report_json(const LawReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e;
    e["law"] = c.law;
    e["pass"] = c.pass;
    e["max_residual"] = c.max_residual;
    e["samples"] = c.samples;
    checks.push_back(std::move(e));
  }
  Json j;
  j["theory"] = rep.theory;
  j["checks"] = std::move(checks);
  j["pass"] = rep.all_pass();
  return j;
}

std::string law_report_text(const LawReport& rep) {
  std::ostringstream os;
  os << "laws for " << rep.theory << ":\n";
  for (const auto& c : rep.checks)
    os << "  " << (c.pass ? "pass" : "FAIL") << "  " << c.law << " (max residual "
       << c.max_residual << ", " << c.samples << " samples)\n";
  return os.str();
}

int cmd_laws(const std::string& theory_name, std::uint64_t seed, int samples, double tol_eps,
             bool as_json, std::ostream& out) {
  const auto theory = theory_by_name(theory_name);
  const Tolerance tol{theory_name == "frel" ? 0.0 : tol_eps};
  const LawReport rep = check_theory_laws(theory, seed, samples, tol);
  emit(out, as_json, law_report_json(rep), law_report_text(rep));
  return rep.all_pass() ? kExitPass : kExitCheckFailure;
}

// ------------------------------ demo-equiv -----------------------------------

int cmd_demo(std::uint64_t seed, const std::string& dims_text, int samples, double tol_eps,
             bool as_json, std::ostream& out) {
  const Tolerance tol{tol_eps};
  std::vector<int> dims;
  {
    std::stringstream ss(dims_text);
    std::string item;
    while (std::getline(ss, item, ',')) dims.push_back(std::stoi(item));
    if (dims.size() < 2) fail("UsageError", "--dims needs at least two entries, e.g. 2,2");
  }
  Rng rng(seed);
  Json j;
  std::ostringstream text;
  bool all = true;
  auto record = [&](const std::string& name, bool ok, double residual) {
    j[name] = Json{{"pass", ok}, {"residual", residual}};
    text << (ok ? "pass" : "FAIL") << "  " << name << " (residual " << residual << ")\n";
    all = all && ok;
  };

  // 1. law suites at a reduced sample count.
  for (const auto& name : {std::string("frel"), std::string("class"), std::string("quant")}) {
    const auto rep = check_theory_laws(theory_by_name(name), rng.next(), samples,
                                       Tolerance{name == "frel" ? 0.0 : tol.eps});
    double worst = 0.0;
    for (const auto& c : rep.checks) worst = std::max(worst, c.max_residual);
    record("laws " + name, rep.all_pass(), worst);
  }

  // 2. biproducts of split systems over a disjoint embedding.
  const auto qt = quant::quant_theory();
  const auto split = karoubi_envelope(qt);
  std::vector<Obj> kobjs;
  std::vector<Obj> carriers;
  for (int d : dims) {
    // A random causal idempotent on [d]: collapse onto a random state.
    const auto [p, dec] = decompose::random_idempotent_instance({{1, d}}, rng.next());
    (void)dec;
    kobjs.push_back(split->make_obj(quant::quant_obj(p.dom()), quant::quant_mor(p), tol));
    carriers.push_back(quant::quant_obj(p.dom()));
  }
  const DisjointEmbedding emb = qt->disjoint_embedding(carriers);
  const auto bp = karoubi_biproduct(split, kobjs, emb, tol);
  {
    double worst = 0.0;
    for (size_t i = 0; i < kobjs.size(); ++i)
      for (size_t k = 0; k < kobjs.size(); ++k) {
        const Mor composite = split->compose(bp.projections[k], bp.injections[i]);
        const Mor expected =
            (i == k) ? split->identity(kobjs[i]) : split->zero(kobjs[i], kobjs[k]);
        worst = std::max(worst, split->distance(composite, expected));
      }
    Mor total = split->zero(bp.object, bp.object);
    for (size_t i = 0; i < kobjs.size(); ++i)
      total = split->sum(total, split->compose(bp.injections[i], bp.projections[i]));
    worst = std::max(worst, split->distance(total, split->identity(bp.object)));
    const bool causal_q = is_causal(KaroubiTheory::idem_of(bp.object), tol);
    record("biproduct in the envelope", worst <= tol.eps && causal_q, worst);
  }

  // 3. functor F on a random matrix of channels.
  {
    const auto biprod = biproduct_completion(qt);
    std::vector<Obj> lists;
    for (int d : dims) lists.push_back(quant::quant_obj(quant::CompositeSystem({d})));
    const Obj list_obj = biprod->make_obj(lists);
    auto random_matrix = [&]() {
      std::vector<std::vector<Mor>> entries(dims.size());
      for (size_t jj = 0; jj < dims.size(); ++jj)
        for (size_t i = 0; i < dims.size(); ++i)
          entries[jj].push_back(qt->random_morphism(lists[i], lists[jj], rng));
      return biprod->make_mor(list_obj, list_obj, entries);
    };
    const Mor M = random_matrix();
    const Mor N = random_matrix();
    const DisjointEmbedding embF = qt->disjoint_embedding(lists);
    double worst = 0.0;
    const Mor fm = functor_f_mor(split, M, embF, embF, tol);
    const Mor fn = functor_f_mor(split, N, embF, embF, tol);
    worst = std::max(worst,
                     split->distance(functor_f_mor(split, biprod->compose(M, N), embF, embF, tol),
                                     split->compose(fm, fn)));
    worst = std::max(worst,
                     split->distance(functor_f_mor(split, biprod->sum(M, N), embF, embF, tol),
                                     split->sum(fm, fn)));
    const Obj fobj = functor_f_obj(split, embF, tol);
    worst = std::max(
        worst, split->distance(functor_f_mor(split, biprod->identity(list_obj), embF, embF, tol),
                               split->identity(fobj)));
    const Mor pre = functor_f_preimage(biprod, fm, embF, embF);
    worst = std::max(worst, biprod->distance(pre, M));
    record("functor F preserves structure", worst <= tol.eps, worst);
  }

  // 4. a planted decomposition round trip.
  {
    std::vector<std::pair<int, int>> spec;
    for (int d : dims) spec.push_back({d, 1});
    const auto [p, planted] = decompose::random_idempotent_instance(spec, rng.next());
    const auto dec = decompose::decompose_cptp_idempotent(p, tol);
    const auto report = verify_decomposition(p, dec, tol);
    std::vector<int> got, want;
    for (const auto& b : dec.blocks) got.push_back(b.dim_a);
    for (const auto& b : planted.blocks) want.push_back(b.dim_a);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    record("idempotent decomposition round trip", report.pass && got == want,
           report.max_residual);
  }

  j["pass"] = all;
  text << (all ? "all equivalence checks pass\n" : "some equivalence checks FAILED\n");
  emit(out, as_json, j, text.str());
  return all ? kExitPass : kExitCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"karoubi: idempotent splitting and biproduct completions over "
               "relations, stochastic matrices and quantum channels"};
  app.require_subcommand(1);

  double tol_eps = 1e-9;
  std::uint64_t seed = 0;
  bool as_json = false;
  app.add_option("--tol", tol_eps, "comparison tolerance")->capture_default_str();
  app.add_option("--seed", seed, "random seed")->capture_default_str();
  app.add_flag("--json", as_json, "machine-readable JSON output");

  std::string in_path, dec_path, inline_p, out_path, kind, theory_name = "frel";
  int b_max = 4, broadcast_n = 0, copy_n = 0, pants_n = 0, samples = 100;
  int demo_samples = 20;
  std::string dims_text = "2,2";

  auto* c_check = app.add_subcommand("check", "validate cp/tp/subcausal/idempotent/causal");
  c_check->add_option("--in", in_path, "morphism JSON file");
  c_check->add_option("--verify-decomposition", dec_path, "re-verify a split output");

  auto* c_split = app.add_subcommand("split", "decompose a CPTP idempotent into blocks");
  c_split->add_option("--in", in_path, "channel JSON file");
  c_split->add_option("--out", out_path, "write the decomposition JSON here");

  auto* c_flor = app.add_subcommand("flor", "rank-one decomposition of a nonnegative idempotent");
  c_flor->add_option("--in", in_path, "matrix JSON file");
  c_flor->add_option("--p", inline_p, "inline JSON matrix");

  auto* c_rel = app.add_subcommand("relsearch", "exhaustive boolean splitting search");
  c_rel->add_option("--in", in_path, "boolean matrix JSON file");
  c_rel->add_option("--p", inline_p, "inline JSON matrix");
  c_rel->add_option("--max", b_max, "largest middle dimension")->capture_default_str();

  auto* c_causal = app.add_subcommand("causalize", "repair a sub-causal idempotent, then split");
  c_causal->add_option("--in", in_path, "channel JSON file");

  auto* c_leak = app.add_subcommand("leak", "leak constructions and checks");
  c_leak->add_option("--in", in_path, "morphism JSON file");
  c_leak->add_option("--kind", kind, "stinespring | trivial");
  c_leak->add_option("--broadcast", broadcast_n, "broadcasting map on n");
  c_leak->add_option("--theory", theory_name, "frel | class | quant")->capture_default_str();

  auto* c_frob = app.add_subcommand("frobenius", "verify a comultiplication, decohere, split");
  c_frob->add_option("--in", in_path, "Frobenius JSON file");
  c_frob->add_option("--copy", copy_n, "copy comultiplication on dim n");
  c_frob->add_option("--pants", pants_n, "normalised pair of pants on M_n");

  auto* c_laws = app.add_subcommand("laws", "sampled law suite for a base theory");
  c_laws->add_option("--theory", theory_name, "frel | class | quant")->capture_default_str();
  c_laws->add_option("--samples", samples, "samples per law")->capture_default_str();

  auto* c_demo = app.add_subcommand("demo-equiv", "seeded end-to-end equivalence demonstration");
  c_demo->add_option("--dims", dims_text, "system dimensions, e.g. 2,2")->capture_default_str();
  c_demo->add_option("--samples", demo_samples, "samples per law in the embedded suite")
      ->capture_default_str();

  for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << "\n";
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (c_check->parsed()) return cmd_check(in_path, dec_path, tol_eps, as_json, out);
    if (c_split->parsed()) return cmd_split(in_path, tol_eps, as_json, out_path, out);
    if (c_flor->parsed()) return cmd_flor(in_path, inline_p, tol_eps, as_json, out);
    if (c_rel->parsed()) return cmd_relsearch(in_path, inline_p, b_max, as_json, out);
    if (c_causal->parsed()) return cmd_causalize(in_path, tol_eps, as_json, out);
    if (c_leak->parsed())
      return cmd_leak(in_path, kind, broadcast_n, theory_name, tol_eps, as_json, out);
    if (c_frob->parsed()) return cmd_frobenius(in_path, copy_n, pants_n, tol_eps, as_json, out);
    if (c_laws->parsed()) return cmd_laws(theory_name, seed, samples, tol_eps, as_json, out);
    if (c_demo->parsed()) return cmd_demo(seed, dims_text, demo_samples, tol_eps, as_json, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitCheckFailure;
  }
  err << "usage error: no subcommand\n";
  return kExitUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace karoubi::cli
