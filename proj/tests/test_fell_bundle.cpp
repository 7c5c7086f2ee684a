#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest/doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "ulab/fell_bundle.hpp"
#include "ulab/rng.hpp"

using namespace ulab;
using namespace ulab::fell;

namespace {

// convolution written as the plain double loop, as an independent reference
Section convolve_reference(const Section& f, const Section& g) {
	const auto& grp = f.bundle->group;
	Section out = zero_section(f.bundle);
	for (std::int64_t t = 0; t < grp.order(); ++t)
		for (std::int64_t s = 0; s < grp.order(); ++s)
			out.at(t) += f.at(s) * g.at(grp.sub(t, s));
	return out;
}

double max_section_diff(const Section& a, const Section& b) {
	double m = 0.0;
	for (std::int64_t t = 0; t < a.bundle->group.order(); ++t)
		m = std::max(m, max_abs(Mat(a.at(t) - b.at(t))));
	return m;
}

}  // namespace

TEST_CASE("fixtures validate and expose their shape") {
	CHECK(fixture_names() == std::vector<std::string>{"m2z2", "z3-shift"});

	const auto m2 = fixture("m2z2");
	CHECK(m2->group.order() == 2);
	CHECK(m2->ambient_dim == 2);
	CHECK(m2->basis_at(0).size() == 2);  // diagonal fiber
	CHECK(m2->basis_at(1).size() == 2);  // antidiagonal fiber
	const auto vm2 = validate_bundle(*m2);
	CHECK(vm2.max_product_residual <= FellBundle::kFiberTol);
	CHECK(vm2.max_involution_residual <= FellBundle::kFiberTol);
	CHECK(vm2.max_unit_fiber_residual <= FellBundle::kFiberTol);

	const auto z3 = fixture("z3-shift");
	CHECK(z3->group.order() == 3);
	CHECK(z3->ambient_dim == 9);
	CHECK(z3->basis_at(0).size() == 3);
	(void)validate_bundle(*z3);

	CHECK_THROWS_AS(fixture("nope"), const Error&);
}

TEST_CASE("a broken grading is named by the validator") {
	const auto m2 = fixture("m2z2");
	FellBundle broken = *m2;
	// move a degree-1 basis element into the degree-0 fiber
	broken.fiber_basis[0].push_back(broken.fiber_basis[1][0]);
	CHECK_THROWS_AS(validate_bundle(broken), const GradingViolation&);

	// make_bundle on non-closed spans refuses the same way
	const auto z2 = abelian::FiniteAbelianGroup::parse("2");
	Mat e01 = Mat::Zero(2, 2);
	e01(0, 1) = 1.0;
	CHECK_THROWS_AS(make_bundle(z2, 2, {{e01}, {e01}}), const GradingViolation&);
}

TEST_CASE("sections stay inside their fibers") {
	const auto m2 = fixture("m2z2");
	Mat diag = Mat::Zero(2, 2);
	diag(0, 0) = 2.0;
	diag(1, 1) = cplx(0.0, -1.0);
	Mat anti = Mat::Zero(2, 2);
	anti(0, 1) = 3.0;

	const Section s = make_section(m2, {diag, anti});
	CHECK(max_abs(Mat(s.at(0) - diag)) == 0.0);

	CHECK_THROWS_AS(make_section(m2, {anti, diag}), const FiberViolation&);
	CHECK_THROWS_AS(delta_section(m2, 1, diag), const FiberViolation&);
	CHECK_THROWS_AS(make_section(m2, {diag}), const ValidationError&);

	const Section r = random_section(m2, 42);
	for (std::int64_t t = 0; t < 2; ++t) CHECK(m2->fiber_residual(t, r.at(t)) <= 1e-12);
	const Section r2 = random_section(m2, 42);
	CHECK(max_section_diff(r, r2) == 0.0);  // seeded reproducibility
}

TEST_CASE("convolution matches the reference double loop") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		for (std::uint64_t seed = 1; seed <= 5; ++seed) {
			const Section f = random_section(b, derive_seed(7, seed));
			const Section g = random_section(b, derive_seed(8, seed));
			CHECK(max_section_diff(convolve(f, g), convolve_reference(f, g)) <= 1e-12);
		}
	}
}

TEST_CASE("involution is an anti-homomorphism and squares to the identity") {
	const auto b = fixture("m2z2");
	const Section f = random_section(b, 101);
	const Section g = random_section(b, 102);
	CHECK(max_section_diff(involve(involve(f)), f) <= 1e-13);
	CHECK(max_section_diff(involve(convolve(f, g)), convolve(involve(g), involve(f))) <= 1e-12);
}

TEST_CASE("the regular representation is a *-homomorphism") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		const Section f = random_section(b, derive_seed(21, b->group.order()));
		const Section g = random_section(b, derive_seed(22, b->group.order()));
		CHECK(max_abs(Mat(regular_representation(convolve(f, g)) -
		                  regular_representation(f) * regular_representation(g))) <= 1e-11);
		CHECK(max_abs(Mat(regular_representation(involve(f)) -
		                  regular_representation(f).adjoint())) <= 1e-12);
		const Mat sum = regular_representation(add(f, scale(g, cplx(0.0, 2.0))));
		CHECK(max_abs(Mat(sum - regular_representation(f) -
		                  cplx(0.0, 2.0) * regular_representation(g))) <= 1e-12);
	}
}

TEST_CASE("one-dimensional fibers over Z2 recover circulant arithmetic") {
	// trivial bundle: every fiber is the scalars; convolution is the group algebra
	const auto z2 = abelian::FiniteAbelianGroup::parse("2");
	const Mat one = Mat::Identity(1, 1);
	const auto b = make_bundle(z2, 1, {{one}, {one}});
	Section f = zero_section(b);
	f.at(0)(0, 0) = 2.0;
	f.at(1)(0, 0) = 3.0;
	const Section sq = convolve(f, f);
	CHECK(std::abs(sq.at(0)(0, 0) - cplx(13.0, 0.0)) <= 1e-14);  // 2*2 + 3*3
	CHECK(std::abs(sq.at(1)(0, 0) - cplx(12.0, 0.0)) <= 1e-14);  // 2*3 + 3*2
	// the C* identity on the group algebra of Z2
	CHECK(cstar_norm(f) == doctest::Approx(5.0));  // |2| + |3| at the trivial character
}

TEST_CASE("the C* identity holds for the representation norm") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		for (int i = 0; i < 20; ++i) {
			const Section f = random_section(b, derive_seed(333, i));
			const double direct = cstar_norm(f);
			const double via_square = std::sqrt(cstar_norm(convolve(involve(f), f)));
			CHECK(std::abs(direct - via_square) <= 1e-9 * std::max(1.0, direct));
		}
	}
}

TEST_CASE("multipliers act by translated fiber multiplication") {
	const auto b = fixture("m2z2");
	const Section g = random_section(b, 55);
	const Section f = random_section(b, 56);

	// a multiplier concentrated at a point is convolution by its delta section
	Mat anti = Mat::Zero(2, 2);
	anti(0, 1) = 1.0;
	anti(1, 0) = -2.0;
	const auto m = make_multiplier(b, 1, anti);
	const Section left = multiplier_apply(m, g, Side::Left);
	const Section right = multiplier_apply(m, g, Side::Right);
	const Section dl = delta_section(b, 1, anti);
	CHECK(max_section_diff(left, convolve(dl, g)) <= 1e-12);
	CHECK(max_section_diff(right, convolve(g, dl)) <= 1e-12);

	// multiplication operators compose associatively with convolution
	const Section assoc1 = multiplier_apply(m, convolve(g, f), Side::Left);
	const Section assoc2 = convolve(multiplier_apply(m, g, Side::Left), f);
	CHECK(max_section_diff(assoc1, assoc2) <= 1e-12);

	CHECK_THROWS_AS(make_multiplier(b, 1, Mat::Identity(2, 2)), const FiberViolation&);
}

TEST_CASE("the dual action is a pointwise character twist and a group action") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		const auto& grp = b->group;
		const Section f = random_section(b, derive_seed(77, grp.order()));
		for (std::int64_t x = 0; x < grp.order(); ++x) {
			const Section fx = dual_action(x, f);
			for (std::int64_t t = 0; t < grp.order(); ++t)
				CHECK(max_abs(Mat(fx.at(t) - abelian::pairing(grp, t, x) * f.at(t))) <= 1e-13);
			for (std::int64_t y = 0; y < grp.order(); ++y) {
				const Section two = dual_action(x, dual_action(y, f));
				const Section one = dual_action(grp.add(x, y), f);
				CHECK(max_section_diff(two, one) <= 1e-12);
			}
			// the action is isometric and implemented by the advertised unitary
			CHECK(std::abs(cstar_norm(fx) - cstar_norm(f)) <= 1e-9);
			const Mat W = dual_action_unitary(*b, x);
			CHECK(max_abs(Mat(W * W.adjoint() -
			                  Mat::Identity(W.rows(), W.cols()))) <= 1e-12);
			CHECK(max_abs(Mat(regular_representation(fx) -
			                  W * regular_representation(f) * W.adjoint())) <= 1e-11);
		}
	}
}

TEST_CASE("transformed multiplier action matches the twisted section") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		for (std::int64_t x = 0; x < b->group.order(); ++x)
			for (int i = 0; i < 5; ++i) {
				const Section f = random_section(b, derive_seed(400 + x, i));
				CHECK(hat_equals_action_check(f, x) <= 1e-11);
			}
	}
}

TEST_CASE("squares are positive type in the representation") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		for (int i = 0; i < 10; ++i) {
			const auto v = section_positive_type_check(random_section(b, derive_seed(500, i)));
			CHECK(v.is_positive_type);
			CHECK(v.min_eigenvalue >= -1e-10);
		}
	}
}

TEST_CASE("spectral slices of the main identity: trivial and zero cases") {
	const auto b = fixture("m2z2");
	const Section zero = zero_section(b);
	const Section a = random_section(b, 600);
	const auto rz = main_theorem_check(zero, a, 0);
	CHECK(rz.abs_err == 0.0);
	CHECK(rz.certificate_status == ucond::CertStatus::Exact);
	CHECK(rz.certificate_epsilon == 0.0);

	// f = delta at the identity with a projection coefficient: P(t) collapses
	// to multiplication by a fixed fiber element
	Mat proj = Mat::Zero(2, 2);
	proj(0, 0) = 1.0;
	const Section d = delta_section(b, 0, proj);
	const auto rd = main_theorem_check(d, a, 1);
	CHECK(rd.abs_err <= 1e-12);
}

TEST_CASE("spectral slices of the main identity: seeded grid") {
	for (const auto& name : fixture_names()) {
		const auto b = fixture(name);
		for (int i = 0; i < 15; ++i) {
			const Section f = random_section(b, derive_seed(700, 2 * i));
			const Section a = random_section(b, derive_seed(700, 2 * i + 1));
			Rng rng(derive_seed(701, i));
			const std::int64_t t = rng.uniform_int(0, b->group.order() - 1);
			const auto r = main_theorem_check(f, a, t);
			CHECK(r.abs_err <= 1e-10);
			CHECK(r.certificate_epsilon == 0.0);
			CHECK(r.certificate_status == ucond::CertStatus::Exact);
			// both orderings agree with their stated closed forms
			CHECK(max_section_diff(r.lhs_acting_right, r.rhs_acting_right) <= 1e-10);
			CHECK(max_section_diff(r.lhs_acting_left, r.rhs_acting_left) <= 1e-10);
		}
	}
}

TEST_CASE("semidirect construction reproduces hand-built gradings") {
	const auto z2 = abelian::FiniteAbelianGroup::parse("2");

	// action by conjugation with diag(1,-1): even/odd matrix grading
	Mat u = Mat::Identity(2, 2);
	u(1, 1) = -1.0;
	const auto b = build_semidirect_bundle(z2, 2, {Mat::Identity(2, 2), u});
	CHECK(b->ambient_dim == 4);
	CHECK(b->group.order() == 2);
	(void)validate_bundle(*b);
	const Section f = random_section(b, 900);
	const Section g = random_section(b, 901);
	CHECK(max_section_diff(convolve(f, g), convolve_reference(f, g)) <= 1e-12);

	// the shift fixture is the same construction on the diagonal subalgebra
	const auto z3 = fixture("z3-shift");
	CHECK(z3->basis_at(1).size() == 3);

	// a non-invariant subalgebra is refused
	Mat e00 = Mat::Zero(2, 2);
	e00(0, 0) = 1.0;
	Mat swap = Mat::Zero(2, 2);
	swap(0, 1) = 1.0;
	swap(1, 0) = 1.0;
	CHECK_THROWS_AS(
	    build_semidirect_bundle(z2, 2, {Mat::Identity(2, 2), swap},
	                            std::optional<std::vector<Mat>>({e00})),
	    const Error&);
}

TEST_CASE("mismatched bundles refuse to interact") {
	const auto a = fixture("m2z2");
	const auto b = fixture("z3-shift");
	const Section f = random_section(a, 1);
	const Section g = random_section(b, 2);
	CHECK_THROWS_AS(convolve(f, g), const BundleMismatch&);
	CHECK_THROWS_AS(add(f, g), const BundleMismatch&);
}
