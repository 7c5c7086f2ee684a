// Acceptance gate: one line per criterion, nonzero exit if any fails.
// Tolerances and time budgets are pinned here on purpose; loosening them is
// a deliberate edit, not a knob.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "ulab/alpha_integrability.hpp"
#include "ulab/fell_bundle.hpp"
#include "ulab/finite_abelian.hpp"
#include "ulab/instances.hpp"
#include "ulab/lab.hpp"
#include "ulab/positive_type.hpp"
#include "ulab/rng.hpp"
#include "ulab/ucond.hpp"

using namespace ulab;

namespace {

constexpr double kPi = 3.14159265358979323846;

const std::vector<std::string> kGroups = {"2", "3", "4,2", "5", "12"};

struct Outcome {
	bool pass = false;
	std::string detail;
};

std::string sci(double v) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.3g", v);
	return buf;
}

action::SparseZOp sample_zop(Rng& rng, int terms, std::int64_t span) {
	action::SparseZOp v;
	for (int i = 0; i < terms; ++i)
		v += action::SparseZOp::unit(rng.uniform_int(-span, span), rng.uniform_int(-span, span),
		                             rng.gaussian_complex());
	return v;
}

// 1: recovering p(t) from its transform is exact on a seeded grid of groups
// and fiber dimensions, with an exact certificate every time.
Outcome criterion_inversion() {
	double worst = 0.0;
	long checks = 0;
	for (const auto& gname : kGroups) {
		const auto g = abelian::FiniteAbelianGroup::parse(gname);
		for (int dim : {1, 2, 3}) {
			for (int s = 0; s < 20; ++s) {
				const auto p = ptype::random_positive_type(
				    g, dim, derive_seed(0xACC1, static_cast<std::uint64_t>(checks + s + dim)));
				for (std::int64_t t = 0; t < g.order(); ++t) {
					const auto r = ptype::inversion_check(p, t);
					worst = std::max(worst, r.abs_err);
					++checks;
					if (r.status != ucond::CertStatus::Exact || r.certificate_epsilon != 0.0)
						return {false, "non-exact certificate at " + gname};
				}
			}
		}
	}
	return {worst <= 1e-10, "max err " + sci(worst) + " over " + std::to_string(checks) + " checks"};
}

// 2: every seeded positive-type field dilates to a genuinely unitary
// representation that reconstructs the field.
Outcome criterion_dilation() {
	double unit_worst = 0.0, hom_worst = 0.0, rec_worst = 0.0;
	for (const auto& gname : kGroups) {
		const auto g = abelian::FiniteAbelianGroup::parse(gname);
		const std::int64_t n = g.order();
		for (int dim : {1, 2, 3}) {
			for (int s = 0; s < 20; ++s) {
				const auto p = ptype::random_positive_type(
				    g, dim, derive_seed(0xACC2, static_cast<std::uint64_t>(s * 100 + dim * 10) +
				                                    static_cast<std::uint64_t>(n)));
				const auto dil = ptype::naimark_dilate(p);
				const Mat id = Mat::Identity(dil.dilation_dim, dil.dilation_dim);
				for (std::int64_t t = 0; t < n; ++t) {
					const Mat& u = dil.rep_at(t);
					unit_worst = std::max(unit_worst, max_abs(Mat(u * u.adjoint() - id)));
					rec_worst = std::max(
					    rec_worst,
					    max_abs(Mat(dil.embedding.adjoint() * u * dil.embedding - p.at(t))));
					for (std::int64_t r = 0; r < n; ++r)
						hom_worst = std::max(
						    hom_worst, max_abs(Mat(u * dil.rep_at(r) - dil.rep_at(g.add(t, r)))));
				}
			}
		}
	}
	const bool ok = unit_worst <= 1e-10 && hom_worst <= 1e-10 && rec_worst <= 1e-8;
	return {ok, "unitarity " + sci(unit_worst) + ", homomorphism " + sci(hom_worst) +
	                ", reconstruction " + sci(rec_worst)};
}

// 3: the sliced reconstruction agrees with both operator orderings, over all
// character subsets when the group is small enough to enumerate them.
Outcome criterion_combined() {
	double worst = 0.0, gap_worst = 0.0;
	long checks = 0;
	for (const auto& gname : kGroups) {
		const auto g = abelian::FiniteAbelianGroup::parse(gname);
		const std::int64_t n = g.order();
		for (int s = 0; s < 3; ++s) {
			const auto p = ptype::random_positive_type(
			    g, 2, derive_seed(0xACC3, static_cast<std::uint64_t>(s) + static_cast<std::uint64_t>(n) * 7));
			const auto sys = ptype::DilationSystem::build(p);
			std::vector<std::vector<std::int64_t>> subsets;
			if (n <= 8) {
				for (std::int64_t mask = 0; mask < (std::int64_t{1} << n); ++mask) {
					std::vector<std::int64_t> L;
					for (std::int64_t x = 0; x < n; ++x)
						if (mask & (std::int64_t{1} << x)) L.push_back(x);
					subsets.push_back(std::move(L));
				}
			} else {
				Rng rng(derive_seed(0xACC3, 5000 + static_cast<std::uint64_t>(s)));
				for (int m = 0; m < 64; ++m) {
					std::vector<std::int64_t> L;
					for (std::int64_t x = 0; x < n; ++x)
						if (rng.uniform() < 0.5) L.push_back(x);
					subsets.push_back(std::move(L));
				}
			}
			for (const auto& L : subsets)
				for (std::int64_t t = 0; t < n; ++t) {
					const auto r = ptype::combined_check(sys, t, L);
					worst = std::max(worst, r.abs_err);
					gap_worst = std::max(gap_worst, r.ordering_gap);
					++checks;
				}
		}
	}
	const bool ok = worst <= 1e-9 && gap_worst <= 1e-12;
	return {ok, "max err " + sci(worst) + ", ordering gap " + sci(gap_worst) + " over " +
	                std::to_string(checks) + " checks"};
}

// 4: the two scalar measures attached to (p, xi, eta) coincide character by
// character, and weighted sums of them coincide for random weights.
Outcome criterion_measures() {
	double worst = 0.0;
	for (const auto& gname : kGroups) {
		const auto g = abelian::FiniteAbelianGroup::parse(gname);
		for (int s = 0; s < 50; ++s) {
			const auto p = ptype::random_positive_type(
			    g, 2, derive_seed(0xACC4, static_cast<std::uint64_t>(s) * 31 + static_cast<std::uint64_t>(g.order())));
			const auto sys = ptype::DilationSystem::build(p);
			Rng rng(derive_seed(0xACC4, 90000 + static_cast<std::uint64_t>(s) * 7 +
			                                static_cast<std::uint64_t>(g.order())));
			const Vec xi = random_vector(rng, 2), eta = random_vector(rng, 2);
			worst = std::max(worst, ptype::equal_measures_check(sys, xi, eta));
			std::vector<cplx> weights(static_cast<std::size_t>(g.order()));
			for (auto& w : weights) w = rng.gaussian_complex();
			worst = std::max(worst, ptype::babalu_check(sys, weights, xi, eta).abs_err);
		}
	}
	return {worst <= 1e-9, "max gap " + sci(worst) + " over 50 seeds x " +
	                           std::to_string(kGroups.size()) + " groups"};
}

// 5: the weighted orbit integral of a squared section reproduces the
// multiplier slice on both sides, with exact certificates.
Outcome criterion_main_theorem() {
	double worst = 0.0;
	for (const auto& name : fell::fixture_names()) {
		const auto bundle = fell::fixture(name);
		const std::int64_t n = bundle->group.order();
		for (int i = 0; i < 100; ++i) {
			const auto f = fell::random_section(bundle, derive_seed(0xACC5, 2 * static_cast<std::uint64_t>(i)));
			const auto a =
			    fell::random_section(bundle, derive_seed(0xACC5, 2 * static_cast<std::uint64_t>(i) + 1));
			Rng rng(derive_seed(0xACC5, 7000 + static_cast<std::uint64_t>(i)));
			const std::int64_t t = rng.uniform_int(0, n - 1);
			const auto r = fell::main_theorem_check(f, a, t);
			worst = std::max(worst, r.abs_err);
			if (r.certificate_status != ucond::CertStatus::Exact || r.certificate_epsilon != 0.0)
				return {false, "non-exact certificate on " + name};
		}
	}
	return {worst <= 1e-10, "max err " + sci(worst) + " over 2 x 100 seeded triples"};
}

// 6: the transformed multiplier acts exactly like the dual action, and
// squared sections are positive type.
Outcome criterion_hat_and_positivity() {
	double hat_worst = 0.0, eig_worst = 0.0;
	for (const auto& name : fell::fixture_names()) {
		const auto bundle = fell::fixture(name);
		const std::int64_t n = bundle->group.order();
		for (int i = 0; i < 100; ++i) {
			const auto f = fell::random_section(bundle, derive_seed(0xACC6, static_cast<std::uint64_t>(i)));
			Rng rng(derive_seed(0xACC6, 40000 + static_cast<std::uint64_t>(i)));
			hat_worst =
			    std::max(hat_worst, fell::hat_equals_action_check(f, rng.uniform_int(0, n - 1)));
			const auto verdict = fell::section_positive_type_check(f);
			if (!verdict.is_positive_type) return {false, "square failed positivity on " + name};
			eig_worst = std::min(eig_worst, verdict.min_eigenvalue);
			(void)eig_worst;
		}
	}
	const bool ok = hat_worst <= 1e-11 && eig_worst >= -1e-10;
	return {ok, "action gap " + sci(hat_worst) + ", min eigenvalue " + sci(eig_worst)};
}

// 7: the three counterexample instances behave exactly as documented: a
// proof-grade certificate, a parity-subset violation, and a pseudo-bounded
// family with a singleton violation.
Outcome criterion_counterexamples() {
	const auto conv = instances::basis_over_n();
	const auto rc = ucond::u_integrate(conv, 1e-4);
	const auto* cert = std::get_if<ucond::Certificate<SeqVec>>(&rc);
	if (!cert || cert->status != ucond::CertStatus::Proof)
		return {false, "expected a proof certificate for the orthogonal family"};
	const double dist = cert->value.distance_to_reciprocal_limit();
	if (!(dist <= 1e-4)) return {false, "certified value is " + sci(dist) + " from the limit"};

	const auto alt = instances::alternating_harmonic();
	const auto ra = ucond::u_integrate(alt, 1.0);
	const auto* va = std::get_if<ucond::CauchyViolation<cplx>>(&ra);
	if (!va) return {false, "conditional family was not caught"};
	if (!(va->norm > 1.0)) return {false, "violation norm " + sci(va->norm) + " not above 1"};

	const auto sup = instances::sup_norm_basis();
	const std::vector<ucond::LocalSet> sample = {
	    ucond::LocalSet::range(1, 1), ucond::LocalSet::range(1, 64),
	    ucond::LocalSet::from_points({2, 3, 5, 8, 13}), ucond::LocalSet::single(41)};
	const double pb = ucond::pseudo_bound(sup, sample);
	if (pb != 1.0) return {false, "pseudo bound " + sci(pb) + " is not exactly 1"};
	const auto rs = ucond::u_integrate(sup, 0.5);
	const auto* vs = std::get_if<ucond::CauchyViolation<SparseVec>>(&rs);
	if (!vs) return {false, "pseudo-integrable family was not caught"};

	return {true, "proof at distance " + sci(dist) + ", violations of norm " + sci(va->norm) +
	                  " and " + sci(vs->norm)};
}

// 8: summing the twisted orbit directly over a window recovers the closed
// form, is Toeplitz at t = 0, and lands in the right spectral subspace.
Outcome criterion_laurent() {
	const action::ZShiftWorld z;
	const std::vector<action::SparseZOp> cases = {
	    action::SparseZOp::unit(0, 0), action::SparseZOp::unit(0, 1),
	    action::SparseZOp::unit(0, 0) + action::SparseZOp::unit(1, 3, cplx(2.0, 0.0))};
	double rec_worst = 0.0, sub_worst = 0.0;
	for (const auto& b : cases) {
		for (double t : {0.0, 1.0, kPi}) {
			const auto rec = action::laurent_recovery(b, t, 20);
			rec_worst = std::max(rec_worst, rec.max_err);
			if (t == 0.0 && rec.toeplitz_defect != 0.0)
				return {false, "t = 0 window is not exactly Toeplitz"};
			const auto m = action::fourier_of_element(z, b, t);
			sub_worst = std::max(sub_worst, action::spectral_subspace_check(z, m, 6, {1, 2}));
		}
	}
	const bool ok = rec_worst <= 1e-12 && sub_worst <= 1e-14;
	return {ok, "recovery err " + sci(rec_worst) + ", subspace defect " + sci(sub_worst)};
}

// 9: the factored bound holds on seeded data in both worlds, and hereditary
// domination keeps the measured tail within twice the derived budget.
Outcome criterion_inequality_and_cone() {
	const auto bundle = fell::fixture("m2z2");
	const auto fin = action::FiniteWorld::from_bundle(*bundle);
	const int d = fin.algebra_dim;
	for (int i = 0; i < 100; ++i) {
		Rng rng(derive_seed(0xACC9, static_cast<std::uint64_t>(i)));
		const Mat a = random_gaussian(rng, d, d), b = random_gaussian(rng, d, d);
		const Mat m = random_gaussian(rng, d, d), n = random_gaussian(rng, d, d);
		std::vector<std::int64_t> pts;
		for (std::int64_t x = 0; x < fin.dual.order(); ++x)
			if (rng.uniform() < 0.5) pts.push_back(x);
		const auto r = action::main_inequality_check(fin, a, b, m, n,
		                                             ucond::LocalSet::from_points(std::move(pts)));
		if (!r.ok) return {false, "factored bound failed (finite, seed " + std::to_string(i) + ")"};
	}
	const action::ZShiftWorld z;
	for (int i = 0; i < 100; ++i) {
		Rng rng(derive_seed(0xACC9, 100000 + static_cast<std::uint64_t>(i)));
		const auto a = sample_zop(rng, 1 + static_cast<int>(rng.uniform_int(2, 5)), 4);
		const auto b = sample_zop(rng, 1 + static_cast<int>(rng.uniform_int(2, 5)), 4);
		const auto m = sample_zop(rng, 1 + static_cast<int>(rng.uniform_int(2, 5)), 4);
		const auto nn = sample_zop(rng, 1 + static_cast<int>(rng.uniform_int(2, 5)), 4);
		std::vector<std::int64_t> pts;
		for (std::int64_t x = -8; x <= 8; ++x)
			if (rng.uniform() < 0.4) pts.push_back(x);
		const auto r = action::main_inequality_check(z, a, b, m, nn,
		                                             ucond::LocalSet::from_points(std::move(pts)));
		if (!r.ok) return {false, "factored bound failed (shift, seed " + std::to_string(i) + ")"};
	}

	double tail_margin = 0.0;
	const std::vector<ucond::LocalSet> fin_exhaustion = {
	    ucond::LocalSet::range(0, 0), ucond::LocalSet::range(0, fin.dual.order() - 1)};
	for (int i = 0; i < 20; ++i) {
		Rng rng(derive_seed(0xACC9, 200000 + static_cast<std::uint64_t>(i)));
		const Mat g0 = random_gaussian(rng, d, d);
		const Mat k = g0 * g0.adjoint();
		Mat h;
		if (i % 3 == 0) h = k;
		else if (i % 3 == 1) h = 0.5 * k;
		else {
			Eigen::SelfAdjointEigenSolver<Mat> es(k);
			const Mat root = es.operatorSqrt();
			Vec w = random_vector(rng, d);
			w /= std::max(1.0, w.norm());
			h = root * (w * w.adjoint()) * root;
		}
		const Mat c = random_gaussian(rng, d, d);
		const auto r = action::hereditary_cone_check(fin, h, k, c, fin_exhaustion, 1e-3);
		if (!r.chain_ok || r.max_chain_slack > 1e-10)
			return {false, "chain slack " + sci(r.max_chain_slack) + " (finite)"};
		if (r.measured_tail > 2.0 * r.derived_epsilon + 1e-12)
			return {false, "measured tail " + sci(r.measured_tail) + " above twice " +
			                   sci(r.derived_epsilon) + " (finite)"};
		tail_margin = std::max(tail_margin, r.measured_tail - 2.0 * r.derived_epsilon);
	}
	const auto space = ucond::LocalIntegrationSpace::integers();
	std::vector<ucond::LocalSet> z_exhaustion;
	for (std::int64_t npt : {2, 4, 8, 16, 32, 64, 96}) z_exhaustion.push_back(space.first_points(npt));
	for (int i = 0; i < 20; ++i) {
		Rng rng(derive_seed(0xACC9, 300000 + static_cast<std::uint64_t>(i)));
		action::SparseZOp k, h;
		if (i % 3 == 2) {
			k = action::SparseZOp::unit(0, 0) + action::SparseZOp::unit(1, 1);
			const auto cross = action::SparseZOp::unit(0, 1, cplx(0.5, 0.0));
			h = action::SparseZOp::unit(0, 0, cplx(0.5, 0.0)) +
			    action::SparseZOp::unit(1, 1, cplx(0.5, 0.0)) + cross + cross.adjoint();
		} else {
			for (int j = 0; j < 24; ++j)
				k += action::SparseZOp::unit(j, j, cplx(std::pow(2.0, -j), 0.0));
			h = (i % 3 == 0) ? k : k * cplx(0.5, 0.0);
		}
		action::SparseZOp c;
		for (int j = 0; j < 3; ++j)
			c += action::SparseZOp::unit(rng.uniform_int(0, 6), rng.uniform_int(-2, 2),
			                             rng.gaussian_complex());
		const auto r = action::hereditary_cone_check(z, h, k, c, z_exhaustion, 1e-3);
		if (!r.chain_ok || r.max_chain_slack > 1e-10)
			return {false, "chain slack " + sci(r.max_chain_slack) + " (shift)"};
		if (r.measured_tail > 2.0 * r.derived_epsilon + 1e-12)
			return {false, "measured tail " + sci(r.measured_tail) + " above twice " +
			                   sci(r.derived_epsilon) + " (shift)"};
	}
	return {true, "factored bound 2 x 100 seeds, domination 2 x 20 seeds"};
}

// 10: the conjugation world built from a bundle implements the dual action
// through the regular representation.
Outcome criterion_cross_module() {
	double worst = 0.0;
	for (const auto& name : fell::fixture_names()) {
		const auto bundle = fell::fixture(name);
		const auto world = action::FiniteWorld::from_bundle(*bundle);
		const std::int64_t n = bundle->group.order();
		for (int i = 0; i < 50; ++i) {
			const auto f = fell::random_section(bundle, derive_seed(0xACCA, static_cast<std::uint64_t>(i)));
			Rng rng(derive_seed(0xACCA, 60000 + static_cast<std::uint64_t>(i)));
			const std::int64_t x = rng.uniform_int(0, n - 1);
			const Mat lhs = fell::regular_representation(fell::dual_action(x, f));
			const Mat rhs = world.apply(x, fell::regular_representation(f));
			worst = std::max(worst, max_abs(Mat(lhs - rhs)));
		}
	}
	return {worst <= 1e-10, "max gap " + sci(worst) + " over 2 x 50 seeded probes"};
}

}  // namespace

int main() {
	struct Criterion {
		const char* name;
		double budget_ms;
		std::function<Outcome()> fn;
	};
	const std::vector<Criterion> criteria = {
	    {"transform inversion returns the field exactly", 10000, criterion_inversion},
	    {"positive-type fields dilate to unitary representations", 10000, criterion_dilation},
	    {"sliced reconstructions agree in both operator orders", 30000, criterion_combined},
	    {"paired scalar measures coincide on the dual", 5000, criterion_measures},
	    {"weighted orbit integrals reproduce multiplier slices", 10000, criterion_main_theorem},
	    {"transformed multipliers act like the dual action", 10000, criterion_hat_and_positivity},
	    {"counterexample instances certify as expected", 5000, criterion_counterexamples},
	    {"windowed shift sums recover twisted Laurent forms", 2000, criterion_laurent},
	    {"factored bounds and hereditary domination hold", 10000, criterion_inequality_and_cone},
	    {"bundle dual action matches the conjugation world", 5000, criterion_cross_module},
	};

	int failed = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		const auto start = std::chrono::steady_clock::now();
		Outcome out;
		try {
			out = criteria[i].fn();
		} catch (const std::exception& e) {
			out = {false, std::string("exception: ") + e.what()};
		}
		const double ms = std::chrono::duration<double, std::milli>(
		                      std::chrono::steady_clock::now() - start)
		                      .count();
		const bool in_budget = ms <= criteria[i].budget_ms;
		const bool pass = out.pass && in_budget;
		if (!pass) ++failed;
		std::printf("[%s] %02zu %s (%s; %.0f ms / %.0f ms)\n", pass ? "PASS" : "FAIL", i + 1,
		            criteria[i].name, out.detail.c_str(), ms, criteria[i].budget_ms);
		if (!in_budget && out.pass) std::printf("       over time budget\n");
	}
	std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failed,
	            criteria.size());
	return failed == 0 ? 0 : 1;
}
