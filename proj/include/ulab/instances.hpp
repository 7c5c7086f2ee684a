#pragma once

#include <complex>
#include <cstdint>

#include "ulab/ucond.hpp"
#include "ulab/value_types.hpp"

namespace ulab::instances {

using ucond::LocalIntegrationSpace;
using ucond::LocalSet;
using ucond::OracleKind;
using ucond::TailOracle;
using ucond::VectorField;

// f(n) = e_n / n in l2 over the naturals: unconditionally summable but not
// absolutely summable. The orthogonality oracle returns the prefix whose
// squared tail clears eps^2; at eps = 1e-4 that prefix reaches 1e8, which is
// why values are carried in block form.
inline VectorField<SeqVec> basis_over_n() {
	VectorField<SeqVec> f;
	f.space = LocalIntegrationSpace::naturals();
	f.value = [](std::int64_t n) {
		return SeqVec::unit_over(n, {1.0 / static_cast<double>(n), 0.0});
	};
	f.zero = SeqVec{};
	f.norm = [](const SeqVec& v) { return v.l2_norm(); };
	f.range_integral = [](std::int64_t lo, std::int64_t hi) { return SeqVec::block(lo, hi); };
	TailOracle t;
	t.kind = OracleKind::L2Orthogonality;
	t.witness_for = [](double eps) {
		return LocalSet::range(1, inv_square_tail_witness(eps * eps));
	};
	f.tail = t;
	return f;
}

// f(n) = e_n / n^2: norms are summable, so the tail oracle is of the uniform
// l1-of-norms kind and supports uniform_tail_set / truncate_to_local.
inline VectorField<SparseVec> basis_over_n_squared() {
	VectorField<SparseVec> f;
	f.space = LocalIntegrationSpace::naturals();
	f.value = [](std::int64_t n) {
		return SparseVec{{{n, {1.0 / (static_cast<double>(n) * n), 0.0}}}};
	};
	f.zero = SparseVec{};
	f.norm = [](const SparseVec& v) { return v.l2_norm(); };
	TailOracle t;
	t.kind = OracleKind::L1OfNorms;
	t.witness_for = [](double eps) { return LocalSet::range(1, inv_square_tail_witness(eps)); };
	f.tail = t;
	return f;
}

// f(n) = (-1)^n / n in a scalar direction: partial sums along the canonical
// exhaustion converge, but even-only subsets carry half a harmonic series,
// so no unconditional limit exists. No oracle; the engine must find the
// violation itself.
inline VectorField<std::complex<double>> alternating_harmonic() {
	VectorField<std::complex<double>> f;
	f.space = LocalIntegrationSpace::naturals();
	f.value = [](std::int64_t n) {
		const double sign = (n % 2 == 0) ? 1.0 : -1.0;
		return std::complex<double>(sign / static_cast<double>(n), 0.0);
	};
	f.zero = {0.0, 0.0};
	f.norm = [](const std::complex<double>& v) { return std::abs(v); };
	f.sign_hint = [](std::int64_t n) { return (n % 2 == 0) ? 1.0 : -1.0; };
	return f;
}

// f(n) = e_n in the sup norm: every partial integral is a 0/1 vector of sup
// norm exactly 1, so f is pseudo-integrable with bound 1 while any single
// point beyond any witness already violates the Cauchy condition at eps <= 1.
inline VectorField<SparseVec> sup_norm_basis() {
	VectorField<SparseVec> f;
	f.space = LocalIntegrationSpace::naturals();
	f.value = [](std::int64_t n) { return SparseVec{{{n, {1.0, 0.0}}}}; };
	f.zero = SparseVec{};
	f.norm = [](const SparseVec& v) { return v.sup_norm(); };
	return f;
}

}  // namespace ulab::instances
