#ifndef QPC_QUANTUM_HPP
#define QPC_QUANTUM_HPP

// Exact one- and two-qubit linear algebra over density matrices.
//
// Basis ordering is |q1 q2> with q1 the first (most significant) qubit, so
// index 0..3 maps to |00>, |01>, |10>, |11>. Pure states only ever appear as
// their projectors.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string_view>
#include <utility>

#include "qpc/rng.hpp"

namespace qpc {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using Operator2 = Eigen::Matrix<Complex<Scalar>, 2, 2>;

template <typename Scalar>
using Operator4 = Eigen::Matrix<Complex<Scalar>, 4, 4>;

template <typename Scalar>
using Ket4 = Eigen::Matrix<Complex<Scalar>, 4, 1>;

/// A two-qubit density matrix. Same storage as Operator4; the name marks intent.
template <typename Scalar>
using Density = Operator4<Scalar>;

using Matrix2 = Operator2<double>;
using DensityMatrix = Density<double>;

inline constexpr double kAlgebraTolerance = 1e-12;
inline constexpr double kPositivityTolerance = 1e-10;

enum class BellState { PsiPlus, PsiMinus, PhiPlus, PhiMinus };

inline constexpr std::array<BellState, 4> kAllBellStates = {
    BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus};

/// psi states carry parity 0, phi states parity 1.
constexpr int parity(BellState s) {
  return (s == BellState::PhiPlus || s == BellState::PhiMinus) ? 1 : 0;
}

constexpr std::string_view to_string(BellState s) {
  switch (s) {
    case BellState::PsiPlus: return "psi+";
    case BellState::PsiMinus: return "psi-";
    case BellState::PhiPlus: return "phi+";
    case BellState::PhiMinus: return "phi-";
  }
  return "?";
}

BellState bell_state_from_string(std::string_view name);

enum class Slot { First, Second };

/// Single-qubit Pauli matrices. pauli_y uses [[0,-i],[i,0]].
template <typename Scalar = double>
Operator2<Scalar> identity2() {
  return Operator2<Scalar>::Identity();
}

template <typename Scalar = double>
Operator2<Scalar> pauli_x() {
  Operator2<Scalar> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar = double>
Operator2<Scalar> pauli_y() {
  const Complex<Scalar> i(0, 1);
  Operator2<Scalar> m;
  m << Complex<Scalar>(0), -i, i, Complex<Scalar>(0);
  return m;
}

template <typename Scalar = double>
Operator2<Scalar> pauli_z() {
  Operator2<Scalar> m;
  m << 1, 0, 0, -1;
  return m;
}

/// iY = [[0,1],[-1,0]], the disturbance operator.
template <typename Scalar = double>
Operator2<Scalar> pauli_iy() {
  return Complex<Scalar>(0, 1) * pauli_y<Scalar>();
}

template <typename Scalar = double>
Ket4<Scalar> bell_ket(BellState s) {
  const Scalar h = Scalar(1) / std::sqrt(Scalar(2));
  Ket4<Scalar> k = Ket4<Scalar>::Zero();
  switch (s) {
    case BellState::PsiPlus: k(0) = h; k(3) = h; break;
    case BellState::PsiMinus: k(0) = h; k(3) = -h; break;
    case BellState::PhiPlus: k(1) = h; k(2) = h; break;
    case BellState::PhiMinus: k(1) = h; k(2) = -h; break;
  }
  return k;
}

template <typename Scalar = double>
Density<Scalar> bell_density(BellState s) {
  const Ket4<Scalar> k = bell_ket<Scalar>(s);
  return k * k.adjoint();
}

/// |b1 b2><b1 b2|.
template <typename Scalar = double>
Density<Scalar> basis_density(int b1, int b2) {
  Density<Scalar> rho = Density<Scalar>::Zero();
  const int idx = 2 * b1 + b2;
  rho(idx, idx) = 1;
  return rho;
}

template <typename Scalar = double>
Density<Scalar> maximally_mixed() {
  return Density<Scalar>::Identity() / Scalar(4);
}

/// Embeds a single-qubit operator on the given slot: op (x) I or I (x) op.
template <typename Scalar>
Operator4<Scalar> embed(const Operator2<Scalar>& op, Slot slot) {
  Operator4<Scalar> out = Operator4<Scalar>::Zero();
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      if (slot == Slot::First) {
        out.template block<2, 2>(2 * r, 2 * c) = op(r, c) * Operator2<Scalar>::Identity();
      } else {
        out.template block<2, 2>(2 * r, 2 * c) = (r == c ? Complex<Scalar>(1) : Complex<Scalar>(0)) * op;
      }
    }
  }
  return out;
}

template <typename Scalar>
Operator4<Scalar> kron(const Operator2<Scalar>& a, const Operator2<Scalar>& b) {
  Operator4<Scalar> out;
  for (int r = 0; r < 2; ++r)
    for (int c = 0; c < 2; ++c) out.template block<2, 2>(2 * r, 2 * c) = a(r, c) * b;
  return out;
}

/// Applies a single-qubit operator to one slot: (U (x) I) rho (U (x) I)^dagger.
/// Accepts any Eigen expression; anything other than 2x2 is rejected.
template <typename Scalar, typename Derived>
Density<Scalar> single_qubit_apply(const Density<Scalar>& rho, const Eigen::MatrixBase<Derived>& op,
                                   Slot slot) {
  if (op.rows() != 2 || op.cols() != 2) {
    throw std::invalid_argument("single_qubit_apply: operator must be 2x2");
  }
  const Operator2<Scalar> u = op.template cast<Complex<Scalar>>();
  const Operator4<Scalar> full = embed<Scalar>(u, slot);
  return full * rho * full.adjoint();
}

/// tr(rho^2).
template <typename Scalar>
Scalar purity(const Density<Scalar>& rho) {
  return (rho * rho).trace().real();
}

/// <psi| rho |psi> for the ideal Bell state (the squared-fidelity convention).
template <typename Scalar>
Scalar fidelity(BellState ideal, const Density<Scalar>& rho) {
  const Ket4<Scalar> k = bell_ket<Scalar>(ideal);
  return (k.adjoint() * rho * k)(0, 0).real();
}

/// Outcome of a structural validity check on a density matrix.
template <typename Scalar>
struct DensityCheck {
  Scalar hermiticity_error;
  Scalar trace_error;
  Scalar min_eigenvalue;

  bool valid(Scalar algebra_tol = Scalar(kAlgebraTolerance),
             Scalar positivity_tol = Scalar(kPositivityTolerance)) const {
    return hermiticity_error <= algebra_tol && trace_error <= algebra_tol &&
           min_eigenvalue >= -positivity_tol;
  }
};

template <typename Scalar>
DensityCheck<Scalar> check_density(const Density<Scalar>& rho) {
  DensityCheck<Scalar> out;
  out.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  out.trace_error = std::abs(rho.trace() - Complex<Scalar>(1));
  const Operator4<Scalar> herm = (rho + rho.adjoint()) / Scalar(2);
  Eigen::SelfAdjointEigenSolver<Operator4<Scalar>> solver(herm, Eigen::EigenvaluesOnly);
  out.min_eigenvalue = solver.eigenvalues().minCoeff();
  return out;
}

/// Probability of each computational outcome |b1 b2>, index 2*b1+b2.
template <typename Scalar>
std::array<Scalar, 4> computational_probabilities(const Density<Scalar>& rho) {
  std::array<Scalar, 4> p{};
  for (int i = 0; i < 4; ++i) p[i] = std::max(Scalar(0), rho(i, i).real());
  return p;
}

/// Probability of each Bell outcome, in kAllBellStates order.
template <typename Scalar>
std::array<Scalar, 4> bell_probabilities(const Density<Scalar>& rho) {
  std::array<Scalar, 4> p{};
  for (std::size_t i = 0; i < 4; ++i) p[i] = std::max(Scalar(0), fidelity(kAllBellStates[i], rho));
  return p;
}

/// Samples an index from unnormalised weights. Rounding drift in the total is
/// absorbed by normalising against the sum.
template <typename Scalar, std::size_t N>
std::size_t sample_index(const std::array<Scalar, N>& weights, Rng& rng) {
  Scalar total = 0;
  for (Scalar w : weights) total += w;
  const Scalar u = static_cast<Scalar>(rng.uniform()) * total;
  Scalar acc = 0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < N; ++i) {
    if (weights[i] <= 0) continue;
    last_nonzero = i;
    acc += weights[i];
    if (u < acc) return i;
  }
  return last_nonzero;
}

template <typename Scalar>
struct ComputationalOutcome {
  int first;
  int second;
  Density<Scalar> collapsed;
};

/// Measures both qubits in the computational basis.
template <typename Scalar>
ComputationalOutcome<Scalar> measure_computational(const Density<Scalar>& rho, Rng& rng) {
  const std::size_t idx = sample_index(computational_probabilities(rho), rng);
  const int b1 = static_cast<int>(idx >> 1);
  const int b2 = static_cast<int>(idx & 1);
  return {b1, b2, basis_density<Scalar>(b1, b2)};
}

template <typename Scalar>
struct QubitOutcome {
  int bit;
  Density<Scalar> collapsed;
};

/// Measures one qubit in the computational basis and collapses the pair.
template <typename Scalar>
QubitOutcome<Scalar> measure_qubit(const Density<Scalar>& rho, Slot slot, Rng& rng) {
  std::array<Scalar, 2> p{};
  std::array<Operator4<Scalar>, 2> proj;
  for (int b = 0; b < 2; ++b) {
    Operator2<Scalar> pb = Operator2<Scalar>::Zero();
    pb(b, b) = 1;
    proj[b] = embed<Scalar>(pb, slot);
    p[b] = std::max(Scalar(0), (proj[b] * rho).trace().real());
  }
  const int bit = static_cast<int>(sample_index(p, rng));
  Density<Scalar> collapsed = proj[bit] * rho * proj[bit];
  collapsed /= collapsed.trace().real();
  return {bit, collapsed};
}

/// Joint Bell-basis measurement.
template <typename Scalar>
BellState measure_bell(const Density<Scalar>& rho, Rng& rng) {
  return kAllBellStates[sample_index(bell_probabilities(rho), rng)];
}

}  // namespace qpc

#endif  // QPC_QUANTUM_HPP
