#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "karoubi/constructions.hpp"
#include "karoubi/decompose.hpp"
#include "karoubi/laws.hpp"
#include "karoubi/leaks.hpp"

namespace py = pybind11;
using namespace karoubi;
using quant::Channel;
using quant::CompositeSystem;

namespace {

CompositeSystem sys(const std::vector<int>& dims) { return CompositeSystem(dims); }

mat::BoolMatrix to_bool(const RMat& m) {
  mat::BoolMatrix out(int(m.rows()), int(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      const double v = m(i, j);
      if (v != 0.0 && v != 1.0) fail("ShapeError", "boolean entries must be 0 or 1");
      out.set(i, j, v == 1.0);
    }
  return out;
}

RMat from_bool(const mat::BoolMatrix& m) {
  RMat out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j) ? 1.0 : 0.0;
  return out;
}

py::dict validate_dict(const Channel& c, double tol) {
  const auto checks = quant::validate_channel(c, Tolerance{tol});
  py::dict d;
  d["cp"] = checks.cp;
  d["tp"] = checks.tp;
  d["subcausal"] = checks.subcausal;
  d["choi_min_eig"] = checks.choi_min_eig;
  d["tp_residual"] = checks.tp_residual;
  return d;
}

py::list report_list(const decompose::DecompositionReport& rep) {
  py::list out;
  for (const auto& c : rep.checks) {
    py::dict d;
    d["check"] = c.name;
    d["residual"] = c.residual;
    d["pass"] = c.pass;
    out.append(d);
  }
  return out;
}

std::shared_ptr<const Theory> theory_by_name(const std::string& name) {
  if (name == "frel") return mat::frel_theory();
  if (name == "class") return mat::class_theory();
  if (name == "quant") return quant::quant_theory();
  fail("UsageError", "theory must be 'frel', 'class' or 'quant'");
}

}  // namespace

PYBIND11_MODULE(_karoubi, m) {
  m.doc() = "Idempotent splitting and biproduct completions over relations, "
            "stochastic matrices and quantum channels";

  py::register_exception<Error>(m, "KaroubiError");

  py::class_<Channel>(m, "Channel")
      .def(py::init([](const std::vector<int>& dom, const std::vector<int>& cod,
                       const CMat& superop) { return Channel(sys(dom), sys(cod), superop); }),
           py::arg("dom_dims"), py::arg("cod_dims"), py::arg("superop"))
      .def_property_readonly("dom_dims", [](const Channel& c) { return c.dom().dims(); })
      .def_property_readonly("cod_dims", [](const Channel& c) { return c.cod().dims(); })
      .def("superop", [](const Channel& c) { return c.superop(); })
      .def("choi", &Channel::choi)
      .def("compose", &Channel::compose, py::arg("inner"))
      .def("plus", &Channel::plus)
      .def("scaled", [](const Channel& c, Complex s) { return c.scaled(s); })
      .def("tensor", &Channel::tensor)
      .def("adjoint", &Channel::adjoint)
      .def("apply", &Channel::apply, py::arg("operator"))
      .def("distance", &Channel::distance)
      .def("__repr__", [](const Channel& c) {
        return "Channel(" + c.dom().repr() + " -> " + c.cod().repr() + ")";
      });

  m.def("identity_channel", [](const std::vector<int>& dims) { return Channel::identity(sys(dims)); },
        py::arg("dims"));
  m.def("discard_channel", [](const std::vector<int>& dims) { return Channel::discard(sys(dims)); },
        py::arg("dims"));
  m.def("zero_channel",
        [](const std::vector<int>& dom, const std::vector<int>& cod) {
          return Channel::zero(sys(dom), sys(cod));
        },
        py::arg("dom_dims"), py::arg("cod_dims"));
  m.def("channel_from_kraus",
        [](const std::vector<CMat>& ops, const std::vector<int>& dom, const std::vector<int>& cod) {
          return Channel::from_kraus(quant::KrausSet{ops}, sys(dom), sys(cod));
        },
        py::arg("kraus"), py::arg("dom_dims"), py::arg("cod_dims"));
  m.def("channel_from_choi",
        [](const CMat& choi, const std::vector<int>& dom, const std::vector<int>& cod, double tol) {
          return Channel::from_choi(choi, sys(dom), sys(cod), Tolerance{tol});
        },
        py::arg("choi"), py::arg("dom_dims"), py::arg("cod_dims"), py::arg("tol") = 1e-9);
  m.def("pure_embed", [](const CMat& f) { return quant::pure_embed(quant::PureMap{f}); },
        py::arg("matrix"), "The channel X -> f X f^dag of a single operator.");

  m.def("validate_channel", &validate_dict, py::arg("channel"), py::arg("tol") = 1e-9);
  m.def("is_causal",
        [](const Channel& c, double tol) { return is_causal(quant::quant_mor(c), Tolerance{tol}); },
        py::arg("channel"), py::arg("tol") = 1e-9);
  m.def("is_idempotent",
        [](const Channel& c, double tol) {
          return is_idempotent(quant::quant_mor(c), Tolerance{tol});
        },
        py::arg("channel"), py::arg("tol") = 1e-9);
  m.def("is_subcausal",
        [](const Channel& c, double tol) {
          return is_subcausal(quant::quant_mor(c), Tolerance{tol});
        },
        py::arg("channel"), py::arg("tol") = 1e-9);

  py::class_<decompose::Block>(m, "Block")
      .def_readonly("dim_a", &decompose::Block::dim_a)
      .def_readonly("dim_b", &decompose::Block::dim_b)
      .def_readonly("tau_rank", &decompose::Block::tau_rank)
      .def_readonly("tau", &decompose::Block::tau)
      .def_readonly("m", &decompose::Block::m)
      .def_readonly("e", &decompose::Block::e)
      .def("__repr__", [](const decompose::Block& b) {
        return "Block(dim_a=" + std::to_string(b.dim_a) + ", dim_b=" + std::to_string(b.dim_b) +
               ")";
      });

  py::class_<decompose::BlockDecomposition>(m, "BlockDecomposition")
      .def_readonly("blocks", &decompose::BlockDecomposition::blocks)
      .def_readonly("basis", &decompose::BlockDecomposition::basis)
      .def_readonly("residual_dim", &decompose::BlockDecomposition::residual_dim)
      .def_readonly("q", &decompose::BlockDecomposition::q)
      .def_readonly("split_m", &decompose::BlockDecomposition::split_m)
      .def_readonly("split_e", &decompose::BlockDecomposition::split_e)
      .def_property_readonly("dims_a",
                             [](const decompose::BlockDecomposition& d) {
                               std::vector<int> out;
                               for (const auto& b : d.blocks) out.push_back(b.dim_a);
                               return out;
                             })
      .def("__repr__", [](const decompose::BlockDecomposition& d) {
        std::string s = "BlockDecomposition([";
        for (size_t i = 0; i < d.blocks.size(); ++i)
          s += (i ? ", " : "") + std::to_string(d.blocks[i].dim_a) + "x" +
               std::to_string(d.blocks[i].dim_b);
        return s + "], residual_dim=" + std::to_string(d.residual_dim) + ")";
      });

  m.def("fixed_point_space",
        [](const Channel& c, double tol) { return decompose::fixed_point_space(c, Tolerance{tol}); },
        py::arg("channel"), py::arg("tol") = 1e-9,
        "Hermitian orthonormal basis of { X : c(X) = X }.");
  m.def("decompose_cptp_idempotent",
        [](const Channel& p, double tol) {
          return decompose::decompose_cptp_idempotent(p, Tolerance{tol});
        },
        py::arg("channel"), py::arg("tol") = 1e-9);
  m.def("verify_decomposition",
        [](const Channel& p, const decompose::BlockDecomposition& dec, double tol) {
          return report_list(verify_decomposition(p, dec, Tolerance{tol}));
        },
        py::arg("channel"), py::arg("decomposition"), py::arg("tol") = 1e-9);
  m.def("random_idempotent_instance",
        [](const std::vector<std::pair<int, int>>& spec, std::uint64_t seed) {
          return decompose::random_idempotent_instance(spec, seed);
        },
        py::arg("spec"), py::arg("seed"));

  m.def("causalize_subcausal",
        [](const Channel& p, double tol) {
          Mor pm = quant::quant_mor(p);
          Mor a = causalize_witness_state(pm, Tolerance{tol});
          return quant::channel_payload(causalize_subcausal(pm, a, Tolerance{tol}));
        },
        py::arg("channel"), py::arg("tol") = 1e-9,
        "Repair a non-zero sub-causal idempotent into a causal one with the same image.");

  m.def("flor_decompose",
        [](const RMat& p, double tol) {
          const auto dec = decompose::flor_decompose(p, Tolerance{tol});
          py::list out;
          for (const auto& [u, v] : dec.pairs) out.append(py::make_tuple(u, v));
          return out;
        },
        py::arg("matrix"), py::arg("tol") = 1e-9,
        "Biorthogonal nonnegative rank-one pairs of a nonnegative idempotent.");

  m.def("search_splitting_bool",
        [](const RMat& p, int b_max) -> py::object {
          const auto found = decompose::search_splitting_bool(to_bool(p), b_max);
          if (!found) return py::none();
          return py::make_tuple(from_bool(found->m), from_bool(found->e));
        },
        py::arg("matrix"), py::arg("b_max") = 4,
        "Exhaustive boolean splitting search; None when no splitting exists up to b_max.");

  m.def("stinespring_leak",
        [](const Channel& p, double tol) {
          const auto lc = leaks::stinespring_leak(p, Tolerance{tol});
          const Channel& l = quant::channel_payload(lc.l);
          py::dict d;
          d["leak"] = l;
          d["env_dim"] = l.cod().total_dim() / p.dom().total_dim();
          return d;
        },
        py::arg("channel"), py::arg("tol") = 1e-9);

  m.def("verify_frobenius",
        [](const CMat& delta, int dim, double tol) {
          const auto rep = verify_frobenius(leaks::FrobeniusStructure{dim, delta}, Tolerance{tol});
          py::dict d;
          d["coassoc"] = rep.coassoc;
          d["frobenius_law"] = rep.frobenius_law;
          d["special"] = rep.special;
          d["coassoc_residual"] = rep.coassoc_residual;
          d["frobenius_residual"] = rep.frobenius_residual;
          d["special_residual"] = rep.special_residual;
          return d;
        },
        py::arg("delta"), py::arg("dim"), py::arg("tol") = 1e-9);
  m.def("decoherence_idempotent",
        [](const CMat& delta, int dim, double tol) {
          return leaks::decoherence_idempotent(leaks::FrobeniusStructure{dim, delta},
                                               Tolerance{tol});
        },
        py::arg("delta"), py::arg("dim"), py::arg("tol") = 1e-9);
  m.def("copy_delta", [](int d) { return leaks::copy_delta(d).delta; }, py::arg("dim"));
  m.def("pants_delta", [](int n) { return leaks::pants_delta(n).delta; }, py::arg("n"));

  m.def("environment_axiom_check",
        [](const CMat& f, const CMat& g, double tol) {
          const auto r = quant::environment_axiom_check(quant::PureMap{f}, quant::PureMap{g},
                                                        Tolerance{tol});
          py::dict d;
          d["discard_eq"] = r.discard_eq;
          d["gram_eq"] = r.gram_eq;
          d["consistent"] = r.consistent;
          return d;
        },
        py::arg("f"), py::arg("g"), py::arg("tol") = 1e-9);

  m.def("check_theory_laws",
        [](const std::string& theory, std::uint64_t seed, int samples, double tol) {
          const auto rep = check_theory_laws(theory_by_name(theory), seed, samples,
                                             Tolerance{theory == "frel" ? 0.0 : tol});
          py::list out;
          for (const auto& c : rep.checks) {
            py::dict d;
            d["law"] = c.law;
            d["pass"] = c.pass;
            d["max_residual"] = c.max_residual;
            d["samples"] = c.samples;
            out.append(d);
          }
          return out;
        },
        py::arg("theory"), py::arg("seed") = 0, py::arg("samples") = 100, py::arg("tol") = 1e-9);
}
