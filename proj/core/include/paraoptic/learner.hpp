#pragma once

// Learners as parametrised lenses over the smooth base: the lift of a
// smooth map to its forward/backward lens, optimiser lenses that
// reparametrise a learner's port ⟨ℝ^p, ℝ^p⟩, weight tying, and one-step
// training of a single learner and of a GAN.

#include <cstddef>

#include "paraoptic/para.hpp"
#include "paraoptic/smooth.hpp"

namespace paraoptic {

using SmoothLens = Lens<SmoothBase>;
using SmoothParaLens = ParaLens<SmoothBase>;
using SmoothLensObj = LensObj<SmoothBase>;

// ⟨ℝ^n, ℝ^n⟩: a space paired with its space of changes.
inline SmoothLensObj tangent(std::size_t n) { return {Space{n}, Space{n}}; }

// The parametrised lens with params ⟨ℝ^p, ℝ^p⟩, src ⟨ℝ^n, ℝ^n⟩, dst
// ⟨ℝ^m, ℝ^m⟩ whose get runs f forward and whose put runs f forward to
// record a tape, then backward: put((p, x), dy) = (dp, dx).
SmoothParaLens apply_R(const SmoothMap& f);

// get = id, put(p, g) = p − α g.
SmoothLens gd_lens(double alpha, std::size_t dim);
// gd_lens(−α): moves along the gradient.
SmoothLens ga_lens(double alpha, std::size_t dim);

// ⟨ℝ^d, ℝ^d⟩ → ⟨ℝ^2d, ℝ^2d⟩: get duplicates, put sums the two cotangents.
SmoothLens copy_lens(std::size_t dim);

// The costate ⟨ℝ^n, ℝ^n⟩ → I whose backward map is constant at 1, the
// initial seed of backpropagation.
SmoothLens dx_costate(std::size_t n = 1);

struct TrainStepResult {
  Vector p_next;
  double loss = 0.0;
};

// One forward pass, a backward pass seeded by `loss_costate`, and the
// parameter update performed by whatever optimiser lens reparametrised
// `model`. The model must end in a scalar. Throws NumericError on a
// non-finite loss.
TrainStepResult train_step(const SmoothParaLens& model, const Vector& p, const Vector& x,
                           const SmoothLens& loss_costate);

struct GanStepResult {
  Vector p_gen_next;
  Vector p_disc_next;
  double d_fake = 0.0;
  double d_real = 0.0;
};

// The closed GAN system: fake branch gen ; disc and real branch disc side
// by side, the two discriminator copies tied by copy_lens, both scores fed
// to dx costates. The generator is reparametrised by gradient descent and
// the tied discriminator by gradient ascent, both with rate α.
SmoothParaLens gan_system(const SmoothParaLens& gen, const SmoothParaLens& disc, double alpha);

// One update of the GAN system on latent z and data sample `real`.
GanStepResult gan_step(const SmoothParaLens& gen, const SmoothParaLens& disc,
                       const Vector& p_gen, const Vector& p_disc, const Vector& z,
                       const Vector& real, double alpha);

}  // namespace paraoptic
