#include "paraoptic/learner.hpp"

#include <cmath>
#include <string>

#include "paraoptic/error.hpp"

namespace paraoptic {

SmoothParaLens apply_R(const SmoothMap& f) {
  const std::size_t p = f.param_dim();
  const std::size_t n = f.in_dim();
  const std::size_t m = f.out_dim();
  const Space spliced{p + n};

  SmoothFn get(spliced, Space{m}, [f, p, n](const Vector& px) {
    return forward_eval(f, px.head(p), px.segment(p, n)).y;
  });
  // The tape lives for exactly one put call.
  SmoothFn put(Space{p + n + m}, spliced, [f, p, n, m](const Vector& in) {
    auto fwd = forward_eval(f, in.head(p), in.segment(p, n));
    auto ct = backward_eval(f, fwd.tape, in.segment(p + n, m));
    return concat(ct.dp, ct.dx);
  });
  SmoothLens carrier({spliced, spliced}, tangent(m), std::move(get), std::move(put));
  return SmoothParaLens(ParamObj<SmoothBase>::from(tangent(p)), tangent(n), tangent(m),
                        std::move(carrier));
}

SmoothLens gd_lens(double alpha, std::size_t dim) {
  if (!std::isfinite(alpha)) throw NumericError("learning rate must be finite");
  SmoothFn put(Space{2 * dim}, Space{dim}, [alpha, dim](const Vector& pg) -> Vector {
    return pg.head(dim) - alpha * pg.segment(dim, dim);
  });
  return SmoothLens(tangent(dim), tangent(dim), SmoothBase::identity(Space{dim}), std::move(put));
}

SmoothLens ga_lens(double alpha, std::size_t dim) { return gd_lens(-alpha, dim); }

SmoothLens copy_lens(std::size_t dim) {
  SmoothFn get(Space{dim}, Space{2 * dim}, [](const Vector& p) { return concat(p, p); });
  SmoothFn put(Space{3 * dim}, Space{dim}, [dim](const Vector& in) -> Vector {
    return in.segment(dim, dim) + in.segment(2 * dim, dim);
  });
  return SmoothLens(tangent(dim), tangent(2 * dim), std::move(get), std::move(put));
}

SmoothLens dx_costate(std::size_t n) {
  return make_costate(tangent(n), SmoothFn(Space{n}, Space{n}, [n](const Vector&) {
                        return Vector::Ones(n).eval();
                      }));
}

TrainStepResult train_step(const SmoothParaLens& model, const Vector& p, const Vector& x,
                           const SmoothLens& loss_costate) {
  const std::size_t pd = model.params().omega.dim;
  if (static_cast<std::size_t>(p.size()) != pd ||
      static_cast<std::size_t>(x.size()) != model.src().fwd.dim) {
    throw DimensionError("train_step expects p ∈ ℝ^" + std::to_string(pd) + " and x ∈ ℝ^" +
                         std::to_string(model.src().fwd.dim));
  }
  if (model.dst().fwd.dim != 1) {
    throw DimensionError("train_step needs a scalar loss, model ends in ℝ^" +
                         std::to_string(model.dst().fwd.dim));
  }
  const Vector px = concat(p, x);
  const double loss = model.carrier().forward(px)[0];
  if (!std::isfinite(loss)) throw NumericError("non-finite loss");
  const auto closed = lens_compose(model.carrier(), loss_costate);
  const Vector back = closed.backward(px, SmoothBase::unique_point());
  return {back.head(pd), loss};
}

SmoothParaLens gan_system(const SmoothParaLens& gen, const SmoothParaLens& disc, double alpha) {
  if (gen.dst().fwd.dim != disc.src().fwd.dim) {
    throw DimensionError("generator produces ℝ^" + std::to_string(gen.dst().fwd.dim) +
                         " but the discriminator reads ℝ^" + std::to_string(disc.src().fwd.dim));
  }
  if (disc.dst().fwd.dim != 1) {
    throw DimensionError("discriminator must output a scalar score");
  }
  using B = SmoothBase;
  const Space pg = gen.params().omega;
  const Space pd = disc.params().omega;

  const auto fake = para_compose(gen, disc);       // params pd × pg
  const auto both = para_tensor(fake, disc);       // params (pd × pg) × pd

  // ⟨pg × pd⟩ → ⟨pg × (pd × pd)⟩ → ⟨(pd × pg) × pd⟩
  const auto agents = lens_tensor(gd_lens(alpha, pg.dim),
                                  lens_compose(ga_lens(alpha, pd.dim), copy_lens(pd.dim)));
  const Space tied = B::product(pd, pd);
  const auto reorder_fwd = B::fanout(
      B::fanout(B::compose(B::proj2(pg, tied), B::proj1(pd, pd)), B::proj1(pg, tied)),
      B::compose(B::proj2(pg, tied), B::proj2(pd, pd)));
  const Space pdpg = B::product(pd, pg);
  const auto reorder_bwd = B::fanout(
      B::compose(B::proj1(pdpg, pd), B::proj2(pd, pg)),
      B::fanout(B::compose(B::proj1(pdpg, pd), B::proj1(pd, pg)), B::proj2(pdpg, pd)));
  const auto reorder = iso_lens<B>(agents.dst(), both.params().as_lens_obj(), reorder_fwd,
                                   reorder_bwd);
  const auto tuned = reparametrise(both, lens_compose(agents, reorder));
  const auto scores = make_costate(tangent(2), SmoothFn(Space{2}, Space{2}, [](const Vector&) {
                                     return Vector::Ones(2).eval();
                                   }));
  // Close off the scores: dst becomes I.
  return SmoothParaLens(tuned.params(), tuned.src(), SmoothLensObj::unit(),
                        lens_compose(tuned.carrier(), scores), tuned.shape());
}

GanStepResult gan_step(const SmoothParaLens& gen, const SmoothParaLens& disc,
                       const Vector& p_gen, const Vector& p_disc, const Vector& z,
                       const Vector& real, double alpha) {
  const auto system = gan_system(gen, disc, alpha);
  const std::size_t pg = gen.params().omega.dim;
  const std::size_t pd = disc.params().omega.dim;
  if (static_cast<std::size_t>(p_gen.size()) != pg ||
      static_cast<std::size_t>(p_disc.size()) != pd ||
      static_cast<std::size_t>(z.size()) != gen.src().fwd.dim ||
      static_cast<std::size_t>(real.size()) != disc.src().fwd.dim) {
    throw DimensionError("gan_step argument dimensions do not match the networks");
  }
  const Vector in = concat(concat(p_gen, p_disc), concat(z, real));
  // Scores are read off the open system before the costates close it.
  const auto fake = para_compose(gen, disc);
  const double d_fake = fake.carrier().forward(concat(concat(p_disc, p_gen), z))[0];
  const double d_real = disc.carrier().forward(concat(p_disc, real))[0];
  if (!std::isfinite(d_fake) || !std::isfinite(d_real)) {
    throw NumericError("non-finite discriminator score");
  }
  const Vector back = system.carrier().backward(in, SmoothBase::unique_point());
  return {back.head(pg), back.segment(pg, pd), d_fake, d_real};
}

}  // namespace paraoptic
