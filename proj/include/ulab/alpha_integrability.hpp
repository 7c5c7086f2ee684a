#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "ulab/fell_bundle.hpp"
#include "ulab/finite_abelian.hpp"
#include "ulab/linalg.hpp"
#include "ulab/ucond.hpp"

namespace ulab::action {

// Finitely supported operator on l2(Z), stored as a sparse entry map.
// All algebra (sums, products, adjoints, shifts) stays exact on the support.
struct SparseZOp {
	std::map<std::pair<std::int64_t, std::int64_t>, cplx> entries;

	static SparseZOp unit(std::int64_t i, std::int64_t j, cplx c = cplx(1.0, 0.0));

	bool empty() const { return entries.empty(); }
	cplx entry(std::int64_t i, std::int64_t j) const;

	SparseZOp& operator+=(const SparseZOp& other);
	friend SparseZOp operator+(SparseZOp a, const SparseZOp& b) { a += b; return a; }
	friend SparseZOp operator-(const SparseZOp& a, const SparseZOp& b);
	friend SparseZOp operator*(const SparseZOp& a, cplx c);
	friend SparseZOp operator*(const SparseZOp& a, double c) { return a * cplx(c, 0.0); }
	friend SparseZOp operator*(const SparseZOp& a, const SparseZOp& b);

	SparseZOp adjoint() const;
	// Conjugation by the bilateral shift: entry (i, j) moves to (i + n, j + n).
	SparseZOp shifted(std::int64_t n) const;

	cplx trace() const;
	std::vector<std::int64_t> row_indices() const;
	std::vector<std::int64_t> col_indices() const;
	// Largest singular value of the dense compression to the support box.
	// Exact for finitely supported operators: everything off the support acts as zero.
	double op_norm() const;
	double max_abs_entry() const;

private:
	void prune();
};

// Operator with entries exp(-i*r*t) * gamma[r - c]: a diagonal twist times a
// Laurent (constant-along-diagonals) part. Finitely many diagonals are stored.
struct TwistedLaurentOp {
	double t = 0.0;
	std::map<std::int64_t, cplx> gamma;

	cplx entry(std::int64_t r, std::int64_t c) const;
	// this * a and a * this; both stay finitely supported because a is.
	SparseZOp left_apply(const SparseZOp& a) const;
	SparseZOp right_apply(const SparseZOp& a) const;
	// Dense restriction to the window [-n, n]^2, as a sparse op.
	SparseZOp window(std::int64_t n) const;
};

// Action of a finite abelian dual group on a matrix algebra by conjugation
// with commuting unitaries. Points of the ucond integration space index
// characters 0..order-1.
struct FiniteWorld {
	abelian::FiniteAbelianGroup dual;
	int algebra_dim = 0;
	std::vector<Mat> unitaries;

	Mat apply(std::int64_t x, const Mat& b) const;
	static FiniteWorld from_unitaries(abelian::FiniteAbelianGroup dual, std::vector<Mat> unitaries);
	static FiniteWorld from_bundle(const fell::FellBundle& bundle);
};

// Action of Z on finitely supported operators by conjugation with the
// bilateral shift.
struct ZShiftWorld {
	SparseZOp apply(std::int64_t n, const SparseZOp& b) const { return b.shifted(n); }
};

Mat alpha_apply(const FiniteWorld& sys, std::int64_t x, const Mat& b);
SparseZOp alpha_apply(const ZShiftWorld& sys, std::int64_t n, const SparseZOp& b);

// Which side the transported element multiplies on: Left integrates
// x -> phi(x) * alpha_x(b) * a, Right integrates x -> phi(x) * a * alpha_x(b).
enum class Side { Left, Right };

template <class E>
struct AlphaIntegral {
	E value;
	ucond::LocalSet witness;
	double epsilon = 0.0;
	ucond::CertStatus status = ucond::CertStatus::Exact;
};

using Weight = std::function<cplx(std::int64_t)>;

AlphaIntegral<Mat> alpha_integral(const FiniteWorld& sys, const Mat& b, const Mat& a,
                                  Side side, const Weight& phi = {});
AlphaIntegral<SparseZOp> alpha_integral(const ZShiftWorld& sys, const SparseZOp& b,
                                        const SparseZOp& a, Side side, const Weight& phi = {});

// Left/right action closures of a transformed element. The element itself
// lives outside the algebra; only its multiplier action is representable.
struct FiniteMultiplier {
	std::function<Mat(const Mat&)> left;
	std::function<Mat(const Mat&)> right;
};

FiniteMultiplier fourier_of_element(const FiniteWorld& sys, const Mat& b, std::int64_t t);
// Closed form for the shift world; construction cross-checks its action
// against alpha_integral on a few probe operators and refuses on mismatch.
TwistedLaurentOp fourier_of_element(const ZShiftWorld& sys, const SparseZOp& b, double t);

// Largest deviation from the covariance law alpha_x(m) = (t, x) * m, probed
// through the multiplier's action since m itself is not in the algebra.
double spectral_subspace_check(const FiniteWorld& sys, const FiniteMultiplier& m,
                               std::int64_t t, const std::vector<Mat>& probes);
// Entrywise check of alpha_n(m) = exp(i*n*t) * m on the given window.
double spectral_subspace_check(const ZShiftWorld& sys, const TwistedLaurentOp& m,
                               std::int64_t window, const std::vector<std::int64_t>& shifts);

template <class E>
struct FactoredFunctional {
	std::function<cplx(const E&)> g;
	E a;
};

// Compares sum_x g(a * alpha_x(b)) * mass against g(a * I(b)) where I(b) is
// the unweighted Right integral; returns the largest absolute gap.
double weak_integral_check(const FiniteWorld& sys, const Mat& b,
                           const std::vector<FactoredFunctional<Mat>>& functionals);
double weak_integral_check(const ZShiftWorld& sys, const SparseZOp& b,
                           const std::vector<FactoredFunctional<SparseZOp>>& functionals);

struct InequalityReport {
	double lhs = 0.0;
	double rhs_sqrt_form = 0.0;
	double rhs_printed_form = 0.0;
	bool ok = false;
	bool printed_ok = false;
};

// ||I_L(m* alpha(a* b) n)|| against the geometric-mean bound
// ||I_L(m* alpha(a* a) m)||^(1/2) * ||I_L(n* alpha(b* b) n)||^(1/2).
// The product form ||.|| * ||.|| is reported alongside but not asserted.
InequalityReport main_inequality_check(const FiniteWorld& sys, const Mat& a, const Mat& b,
                                       const Mat& m, const Mat& n, const ucond::LocalSet& L);
InequalityReport main_inequality_check(const ZShiftWorld& sys, const SparseZOp& a,
                                       const SparseZOp& b, const SparseZOp& m,
                                       const SparseZOp& n, const ucond::LocalSet& L);

struct ConeReport {
	ucond::LocalSet witness;
	double epsilon_k = 0.0;       // tail bound for the compressed k-integral
	double bound_m = 0.0;         // uniform bound on partial integrals of alpha(k)
	double derived_epsilon = 0.0; // sqrt(bound_m * epsilon_k)
	double measured_tail = 0.0;   // largest probed tail of the h-integral
	bool chain_ok = false;
	double max_chain_slack = 0.0;
};

// For 0 <= h <= k with k's compressed integral certified to epsilon_k, the
// h-side tail obeys sqrt(bound_m * epsilon_k). Checks the per-step chain
// ||I_L(alpha(h) c)|| <= ||I_L(alpha(h))||^(1/2) ||I_L(c* alpha(h) c)||^(1/2)
// <= same with k, over the exhaustion, then probes the actual h-tail.
ConeReport hereditary_cone_check(const FiniteWorld& sys, const Mat& h, const Mat& k,
                                 const Mat& c, const std::vector<ucond::LocalSet>& exhaustion,
                                 double eps_request);
ConeReport hereditary_cone_check(const ZShiftWorld& sys, const SparseZOp& h, const SparseZOp& k,
                                 const SparseZOp& c, const std::vector<ucond::LocalSet>& exhaustion,
                                 double eps_request);

struct LaurentRecovery {
	TwistedLaurentOp closed_form;
	double max_err = 0.0;        // direct sum vs closed form, interior window
	double toeplitz_defect = 0.0; // variation along diagonals of the direct sum
};

// Sums exp(-i*n*t) * alpha_n(b) directly onto the [-n, n]^2 window and
// compares with the twisted-Laurent closed form away from the boundary.
LaurentRecovery laurent_recovery(const SparseZOp& b, double t, std::int64_t window);

}  // namespace ulab::action
