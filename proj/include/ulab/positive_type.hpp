#pragma once

#include <cstdint>
#include <vector>

#include "ulab/finite_abelian.hpp"
#include "ulab/ucond.hpp"

namespace ulab::ptype {

struct PositiveTypeVerdict {
	bool is_positive_type = false;
	double min_eigenvalue = 0.0;
	double hermitian_defect = 0.0;
	std::vector<std::int64_t> witness_points;  // block order of the Gram matrix
};

// Builds the full-group block Gram matrix K with block (s,t) = p(t-s) and
// tests positive semidefiniteness of its Hermitian part. Positivity of K
// dominates every finite-subset condition since the subsets are principal
// submatrices.
PositiveTypeVerdict check_positive_type(const abelian::OperatorField& p, double tol = 1e-10);

struct NaimarkDilation {
	abelian::FiniteAbelianGroup group;
	int dim = 1;
	std::int64_t dilation_dim = 0;
	std::vector<Mat> rep;  // unitary per group element, dilation_dim square
	Mat embedding;         // V: dilation_dim x dim
	double cutoff = 0.0;

	const Mat& rep_at(std::int64_t t) const { return rep.at(static_cast<std::size_t>(t)); }
};

// GNS on the Gram matrix: eigenvectors above the cutoff span the dilation
// space; the block translation commutes with K, so its compression is an
// exactly unitary representation there; the embedding is the compressed
// injection at the identity coordinate. Reconstruction p(t) = V* u(t) V
// holds to cutoff order.
NaimarkDilation naimark_dilate(const abelian::OperatorField& p, double tol = 1e-10);

struct SpectralMeasure {
	abelian::FiniteAbelianGroup group;
	std::vector<Mat> projections;  // E({x}) per character

	const Mat& at(std::int64_t x) const { return projections.at(static_cast<std::size_t>(x)); }
	Mat sum_over(const std::vector<std::int64_t>& characters) const;
};

// Finite Stone transform of the dilation's representation. Validates the
// representation first and refuses to average a non-unitary or
// non-homomorphic input.
SpectralMeasure spectral_measure(const NaimarkDilation& dil, double tol = 1e-10);

struct SpectralDiagnostics {
	double idempotency = 0.0;     // max ||E^2 - E||
	double self_adjointness = 0.0;
	double orthogonality = 0.0;   // max over x != y of ||E_x E_y||
	double completeness = 0.0;    // ||sum E_x - I||
	double stone = 0.0;           // max over t of ||u(t) - sum (t,x) E_x||
};

SpectralDiagnostics spectral_diagnostics(const NaimarkDilation& dil, const SpectralMeasure& E);

// Everything the dilation identity checks need, built once per instance.
struct DilationSystem {
	abelian::OperatorField p;
	abelian::OperatorField p_hat;
	NaimarkDilation dil;
	SpectralMeasure E;

	static DilationSystem build(const abelian::OperatorField& p, double tol = 1e-10);
};

struct TwoSidedScalar {
	cplx lhs{};
	cplx rhs{};
	double abs_err = 0.0;
};

// sum_t g(t) <p(t) xi, eta> against <(sum_x ghat(x) E_x) V xi, V eta>
TwoSidedScalar babalu_check(const DilationSystem& sys, const std::vector<cplx>& g, const Vec& xi,
                            const Vec& eta);

// max over characters of |<phat(-x) xi, eta> / |G|  -  <E_x V xi, V eta>|
double equal_measures_check(const DilationSystem& sys, const Vec& xi, const Vec& eta);

struct CombinedResult {
	Mat lhs;               // (1/|G|) sum_{x in L} conj((t,x)) phat(x)
	Mat rhs_measure_first; // V* E(-L) u(t) V
	Mat rhs_rep_first;     // V* u(t) E(-L) V
	double abs_err = 0.0;      // max entry discrepancy of lhs against both
	double ordering_gap = 0.0; // max entry discrepancy between the two orderings
};

CombinedResult combined_check(const DilationSystem& sys, std::int64_t t,
                              const std::vector<std::int64_t>& L);

struct InversionResult {
	Mat value;
	double abs_err = 0.0;
	ucond::CertStatus status = ucond::CertStatus::Exact;
	double certificate_epsilon = 0.0;
};

// Unconditional integral over the dual of conj((t,x)) phat(x) with mass
// 1/|G|, compared entrywise against p(t). The integrand has finite support,
// so the engine's certificate is exact.
InversionResult inversion_check(const abelian::OperatorField& p, std::int64_t t,
                                double tol = 1e-10);
InversionResult inversion_check_with(const abelian::OperatorField& p,
                                     const abelian::OperatorField& p_hat, std::int64_t t);

// Seeded generator: p(t) = V0* (sum_x (t,x) P_x) V0 for a random orthogonal
// partition {P_x} of a larger space and a random embedding V0. Positive-type
// by construction, independently of the verifier.
abelian::OperatorField random_positive_type(const abelian::FiniteAbelianGroup& g, int dim,
                                            std::uint64_t seed);

}  // namespace ulab::ptype
