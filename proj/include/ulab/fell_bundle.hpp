#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ulab/finite_abelian.hpp"
#include "ulab/positive_type.hpp"
#include "ulab/ucond.hpp"

namespace ulab::fell {

// Graded matrix bundle over a finite abelian group: each fiber is a subspace
// of the ambient d x d matrices, held as a Frobenius-orthonormal basis.
// Membership is a projection-residual test.
struct FellBundle {
	static constexpr double kFiberTol = 1e-12;

	abelian::FiniteAbelianGroup group;
	int ambient_dim = 1;
	std::vector<std::vector<Mat>> fiber_basis;  // per group element

	const std::vector<Mat>& basis_at(std::int64_t t) const {
		return fiber_basis.at(static_cast<std::size_t>(t));
	}
	Mat project_onto_fiber(std::int64_t t, const Mat& m) const;
	double fiber_residual(std::int64_t t, const Mat& m) const;
};

using BundlePtr = std::shared_ptr<const FellBundle>;

struct BundleValidation {
	double max_product_residual = 0.0;
	double max_involution_residual = 0.0;
	double max_unit_fiber_residual = 0.0;  // closure of the identity fiber under * and product
};

// Checks the grading axioms basis element by basis element and returns the
// residuals; any residual above tol is a GradingViolation naming the
// offending pair.
BundleValidation validate_bundle(const FellBundle& b, double tol = FellBundle::kFiberTol);

// Orthonormalizes the given spanning sets and validates the grading.
BundlePtr make_bundle(abelian::FiniteAbelianGroup group, int ambient_dim,
                      std::vector<std::vector<Mat>> fiber_spans);

struct Section {
	BundlePtr bundle;
	std::vector<Mat> values;  // one ambient matrix per group element, in-fiber

	const Mat& at(std::int64_t t) const { return values.at(static_cast<std::size_t>(t)); }
	Mat& at(std::int64_t t) { return values.at(static_cast<std::size_t>(t)); }
};

Section make_section(BundlePtr bundle, std::vector<Mat> values);  // FiberViolation on residual
Section zero_section(BundlePtr bundle);
Section delta_section(BundlePtr bundle, std::int64_t t, const Mat& coefficient);
Section random_section(BundlePtr bundle, std::uint64_t seed);

Section convolve(const Section& f, const Section& g);
Section involve(const Section& f);
Section add(const Section& f, const Section& g);
Section scale(const Section& f, cplx c);

// Block matrix of the left regular representation on l2(G) tensor C^d:
// block (t, s) = f(t - s). A *-homomorphism, faithful and isometric here.
Mat regular_representation(const Section& f);
double cstar_norm(const Section& f);

struct BundleMultiplier {
	BundlePtr bundle;
	std::int64_t anchor = 0;
	Mat coefficient;  // in the anchor fiber
};

BundleMultiplier make_multiplier(BundlePtr bundle, std::int64_t anchor, const Mat& coefficient);

enum class Side { Left, Right };

// Left:  (m g)(s) = coefficient * g(s - anchor)
// Right: (g m)(s) = g(s - anchor) * coefficient
Section multiplier_apply(const BundleMultiplier& m, const Section& g, Side side);

Section dual_action(std::int64_t x, const Section& f);

// The |G|d unitary implementing the dual action on the regular
// representation: conjugation by it carries Lambda(f) to Lambda(alpha_x(f)).
Mat dual_action_unitary(const FellBundle& b, std::int64_t x);

// Transform-of-the-multiplier-map identity: on a spanning set of probe
// sections, sum_s (s,x) F(s) applied to g must equal alpha_x(f) * g, on both
// sides. Returns the max entry discrepancy.
double hat_equals_action_check(const Section& f, std::int64_t x);

// P(t) for p = f* * f, compressed to the regular representation, fed to the
// positive-type verifier as an operator field on G.
ptype::PositiveTypeVerdict section_positive_type_check(const Section& f);

struct MainTheoremResult {
	Section lhs_acting_right;  // integral of conj((t,x)) a alpha_x(p)
	Section rhs_acting_right;  // a P(t)
	Section lhs_acting_left;   // integral of conj((t,x)) alpha_x(p) a
	Section rhs_acting_left;   // P(t) a
	double abs_err = 0.0;
	double certificate_epsilon = 0.0;
	ucond::CertStatus certificate_status = ucond::CertStatus::Exact;
};

MainTheoremResult main_theorem_check(const Section& f, const Section& a, std::int64_t t);

// Semidirect-product bundle for a unitary point action: fiber t holds the
// pairs (a, t), a from the coefficient algebra, embedded in ambient
// dimension A_dim * |G|. Defaults to the full matrix algebra; an explicit
// basis selects a subalgebra (it must be invariant under the action).
BundlePtr build_semidirect_bundle(const abelian::FiniteAbelianGroup& g, int a_dim,
                                  const std::vector<Mat>& action,
                                  const std::optional<std::vector<Mat>>& algebra_basis = {});

// Named fixtures: "m2z2" (parity grading of the 2x2 matrices) and "z3-shift"
// (cyclic shift acting on the diagonal subalgebra of the 3x3 matrices).
std::vector<std::string> fixture_names();
BundlePtr fixture(const std::string& name);

}  // namespace ulab::fell
