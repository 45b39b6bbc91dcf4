#include "karoubi/laws.hpp"

#include <algorithm>
#include <functional>

namespace karoubi {

namespace {

struct Draw {
  Obj a, b, c, d;
  Mor f;   // a -> b
  Mor f2;  // a -> b
  Mor f3;  // a -> b
  Mor g;   // b -> c
  Mor g2;  // b -> c
  Mor h;   // c -> d
};

class LawRunner {
 public:
  LawRunner(std::shared_ptr<const Theory> theory, std::uint64_t seed, int samples,
            Tolerance tol, int size_cap)
      : t_(std::move(theory)), rng_(seed), samples_(samples), tol_(tol), cap_(size_cap) {}

  Draw draw() {
    Draw d;
    d.a = t_->random_object(rng_, cap_);
    d.b = t_->random_object(rng_, cap_);
    d.c = t_->random_object(rng_, cap_);
    d.d = t_->random_object(rng_, cap_);
    d.f = t_->random_morphism(d.a, d.b, rng_);
    d.f2 = t_->random_morphism(d.a, d.b, rng_);
    d.f3 = t_->random_morphism(d.a, d.b, rng_);
    d.g = t_->random_morphism(d.b, d.c, rng_);
    d.g2 = t_->random_morphism(d.b, d.c, rng_);
    d.h = t_->random_morphism(d.c, d.d, rng_);
    return d;
  }

  void law(LawReport& report, const std::string& name,
           const std::function<double(Draw&)>& residual) {
    LawCheck check{name, true, 0.0, samples_};
    for (int i = 0; i < samples_; ++i) {
      Draw d = draw();
      check.max_residual = std::max(check.max_residual, residual(d));
    }
    check.pass = check.max_residual <= tol_.eps;
    report.checks.push_back(check);
  }

  const Theory& t() const { return *t_; }

 private:
  std::shared_ptr<const Theory> t_;
  Rng rng_;
  int samples_;
  Tolerance tol_;
  int cap_;
};

}  // namespace

bool LawReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const LawCheck& c) { return c.pass; });
}

LawReport check_theory_laws(const std::shared_ptr<const Theory>& theory, std::uint64_t seed,
                            int samples, Tolerance tol, int size_cap) {
  if (samples < 1) fail("ShapeMismatch", "law suite needs at least one sample");
  LawReport report;
  report.theory = theory->name();
  LawRunner r(theory, seed, samples, tol, size_cap);
  const Theory& t = r.t();

  r.law(report, "compose-assoc", [&](Draw& d) {
    return t.distance(t.compose(d.h, t.compose(d.g, d.f)), t.compose(t.compose(d.h, d.g), d.f));
  });
  r.law(report, "compose-identity", [&](Draw& d) {
    return std::max(t.distance(t.compose(t.identity(d.b), d.f), d.f),
                    t.distance(t.compose(d.f, t.identity(d.a)), d.f));
  });
  r.law(report, "sum-commutative", [&](Draw& d) {
    return t.distance(t.sum(d.f, d.f2), t.sum(d.f2, d.f));
  });
  r.law(report, "sum-associative", [&](Draw& d) {
    return t.distance(t.sum(d.f, t.sum(d.f2, d.f3)), t.sum(t.sum(d.f, d.f2), d.f3));
  });
  r.law(report, "sum-zero-identity", [&](Draw& d) {
    return t.distance(t.sum(d.f, t.zero(d.a, d.b)), d.f);
  });
  r.law(report, "compose-distributes-left", [&](Draw& d) {
    return t.distance(t.compose(d.g, t.sum(d.f, d.f2)),
                      t.sum(t.compose(d.g, d.f), t.compose(d.g, d.f2)));
  });
  r.law(report, "compose-distributes-right", [&](Draw& d) {
    return t.distance(t.compose(t.sum(d.g, d.g2), d.f),
                      t.sum(t.compose(d.g, d.f), t.compose(d.g2, d.f)));
  });
  r.law(report, "zero-absorbs", [&](Draw& d) {
    return std::max(t.distance(t.compose(t.zero(d.b, d.c), d.f), t.zero(d.a, d.c)),
                    t.distance(t.compose(d.g, t.zero(d.a, d.b)), t.zero(d.a, d.c)));
  });

  if (theory->additive_idempotent()) {
    r.law(report, "sum-idempotent", [&](Draw& d) { return t.distance(t.sum(d.f, d.f), d.f); });
  }

  if (theory->has_tensor()) {
    r.law(report, "tensor-bilinear", [&](Draw& d) {
      return std::max(t.distance(t.tensor(d.g, t.sum(d.f, d.f2)),
                                 t.sum(t.tensor(d.g, d.f), t.tensor(d.g, d.f2))),
                      t.distance(t.tensor(t.sum(d.f, d.f2), d.g),
                                 t.sum(t.tensor(d.f, d.g), t.tensor(d.f2, d.g))));
    });
    r.law(report, "tensor-zero", [&](Draw& d) {
      return t.distance(t.tensor(d.f, t.zero(d.c, d.d)),
                        t.zero(t.tensor_obj(d.a, d.c), t.tensor_obj(d.b, d.d)));
    });
    r.law(report, "discard-multiplicative", [&](Draw& d) {
      return t.distance(t.discard(t.tensor_obj(d.a, d.b)),
                        t.tensor(t.discard(d.a), t.discard(d.b)));
    });
    r.law(report, "tensor-interchange", [&](Draw& d) {
      // (g (x) h) . (f (x) g2) = (g . f) (x) (h . g2)
      return t.distance(t.compose(t.tensor(d.g, d.h), t.tensor(d.f, d.g2)),
                        t.tensor(t.compose(d.g, d.f), t.compose(d.h, d.g2)));
    });
  }

  if (theory->has_adjoint()) {
    r.law(report, "adjoint-involution", [&](Draw& d) {
      return t.distance(t.adjoint(t.adjoint(d.f)), d.f);
    });
    r.law(report, "adjoint-antihomomorphism", [&](Draw& d) {
      return t.distance(t.adjoint(t.compose(d.g, d.f)),
                        t.compose(t.adjoint(d.f), t.adjoint(d.g)));
    });
  }

  return report;
}

}  // namespace karoubi
