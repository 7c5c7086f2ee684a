#include "ulab/lab.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ulab/alpha_integrability.hpp"
#include "ulab/errors.hpp"
#include "ulab/fell_bundle.hpp"
#include "ulab/finite_abelian.hpp"
#include "ulab/instances.hpp"
#include "ulab/positive_type.hpp"
#include "ulab/rng.hpp"
#include "ulab/ucond.hpp"

namespace ulab::lab {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string num(double v) {
	char buf[32];
	std::snprintf(buf, sizeof buf, "%.9g", v);
	return buf;
}

void add_check(Report& rep, std::string name, double abs_err, double tol,
               std::string lhs, std::string rhs, std::string cert = "exact") {
	CheckRecord c;
	c.name = std::move(name);
	c.lhs_summary = std::move(lhs);
	c.rhs_summary = std::move(rhs);
	c.abs_err = abs_err;
	c.tol = tol;
	c.pass = abs_err <= tol;
	c.certificate_status = std::move(cert);
	rep.pass = rep.pass && c.pass;
	rep.checks.push_back(std::move(c));
}

// Parameter schemas: key -> expected type tag (s = string, i = integer,
// d = double). Unknown keys and wrong types are validation errors.
const std::map<std::string, std::map<std::string, char>>& param_schemas() {
	static const std::map<std::string, std::map<std::string, char>> schemas = {
	    {"inversion",
	     {{"group", 's'}, {"dim", 'i'}, {"trials", 'i'}, {"seed", 'i'}, {"tol", 'd'}}},
	    {"naimark",
	     {{"group", 's'}, {"dim", 'i'}, {"trials", 'i'}, {"seed", 'i'}, {"tol", 'd'},
	      {"reconstruction_tol", 'd'}}},
	    {"combined",
	     {{"group", 's'}, {"dim", 'i'}, {"trials", 'i'}, {"seed", 'i'}, {"tol", 'd'},
	      {"ordering_tol", 'd'}, {"measure_trials", 'i'}, {"measure_tol", 'd'}}},
	    {"main-theorem",
	     {{"bundle", 's'}, {"trials", 'i'}, {"seed", 'i'}, {"tol", 'd'}, {"hat_tol", 'd'},
	      {"psd_tol", 'd'}}},
	    {"alpha", {{"bundle", 's'}, {"trials", 'i'}, {"seed", 'i'}, {"tol", 'd'}}},
	    {"unconditional", {{"example", 's'}, {"eps", 'd'}}},
	    {"laurent", {{"window", 'i'}, {"tol", 'd'}, {"subspace_tol", 'd'}}},
	    {"inequality",
	     {{"world", 's'}, {"bundle", 's'}, {"trials", 'i'}, {"seed", 'i'}}},
	    {"cone",
	     {{"world", 's'}, {"bundle", 's'}, {"trials", 'i'}, {"seed", 'i'}, {"eps", 'd'}}},
	};
	return schemas;
}

void validate_params(const std::string& kind, const json& params) {
	const auto& schema = param_schemas().at(kind);
	for (const auto& [key, value] : params.items()) {
		auto it = schema.find(key);
		if (it == schema.end())
			throw ValidationError("unknown parameter '" + key + "' for kind '" + kind + "'");
		const char want = it->second;
		const bool ok = (want == 's' && value.is_string()) ||
		                (want == 'i' && value.is_number_integer()) ||
		                (want == 'd' && value.is_number());
		if (!ok)
			throw ValidationError("parameter '" + key + "' of kind '" + kind +
			                      "' has the wrong type");
	}
}

std::string get_string(const json& p, const char* key, const std::string& dflt) {
	return p.contains(key) ? p.at(key).get<std::string>() : dflt;
}

std::int64_t get_int(const json& p, const char* key, std::int64_t dflt) {
	return p.contains(key) ? p.at(key).get<std::int64_t>() : dflt;
}

double get_double(const json& p, const char* key, double dflt) {
	return p.contains(key) ? p.at(key).get<double>() : dflt;
}

void run_inversion(const Scenario& s, Report& rep) {
	const auto g = abelian::FiniteAbelianGroup::parse(get_string(s.params, "group", "5"));
	const int dim = static_cast<int>(get_int(s.params, "dim", 2));
	const std::int64_t trials = get_int(s.params, "trials", 20);
	const double tol = get_double(s.params, "tol", 1e-10);
	for (std::int64_t i = 0; i < trials; ++i) {
		const auto p = ptype::random_positive_type(g, dim, derive_seed(rep.seed, 1000 + i));
		for (std::int64_t t = 0; t < g.order(); ++t) {
			const auto r = ptype::inversion_check(p, t);
			add_check(rep, "inversion/s" + std::to_string(i) + "/t" + std::to_string(t),
			          r.abs_err, tol, "recovered value, eps " + num(r.certificate_epsilon),
			          "p(" + std::to_string(t) + ") directly",
			          ucond::cert_status_name(r.status));
		}
	}
}

void run_naimark(const Scenario& s, Report& rep) {
	const auto g = abelian::FiniteAbelianGroup::parse(get_string(s.params, "group", "4,2"));
	const int dim = static_cast<int>(get_int(s.params, "dim", 2));
	const std::int64_t trials = get_int(s.params, "trials", 20);
	const double tol = get_double(s.params, "tol", 1e-10);
	const double rec_tol = get_double(s.params, "reconstruction_tol", 1e-8);
	for (std::int64_t i = 0; i < trials; ++i) {
		const auto p = ptype::random_positive_type(g, dim, derive_seed(rep.seed, 1000 + i));
		const auto dil = ptype::naimark_dilate(p);
		const Mat eye = Mat::Identity(dil.dilation_dim, dil.dilation_dim);
		double unit = 0.0, hom = 0.0, rec = 0.0;
		for (std::int64_t t = 0; t < g.order(); ++t) {
			const Mat& u = dil.rep_at(t);
			unit = std::max(unit, max_abs(Mat(u.adjoint() * u - eye)));
			rec = std::max(rec,
			               max_abs(Mat(dil.embedding.adjoint() * u * dil.embedding - p.at(t))));
			for (std::int64_t r = 0; r < g.order(); ++r)
				hom = std::max(hom, max_abs(Mat(dil.rep_at(t) * dil.rep_at(r) -
				                                dil.rep_at(g.add(t, r)))));
		}
		const std::string tag = "/s" + std::to_string(i);
		add_check(rep, "unitarity" + tag, unit, tol, "max |u(t)* u(t) - 1|", "0");
		add_check(rep, "homomorphism" + tag, hom, tol, "max |u(s) u(t) - u(s+t)|", "0");
		add_check(rep, "reconstruction" + tag, rec, rec_tol, "max |V* u(t) V - p(t)|", "0");
	}
}

void run_combined(const Scenario& s, Report& rep) {
	const auto g = abelian::FiniteAbelianGroup::parse(get_string(s.params, "group", "2,2"));
	const int dim = static_cast<int>(get_int(s.params, "dim", 2));
	const std::int64_t trials = get_int(s.params, "trials", 3);
	const double tol = get_double(s.params, "tol", 1e-9);
	const double ord_tol = get_double(s.params, "ordering_tol", 1e-12);
	const std::int64_t measure_trials = get_int(s.params, "measure_trials", 50);
	const double measure_tol = get_double(s.params, "measure_tol", 1e-9);
	const std::int64_t n = g.order();

	for (std::int64_t i = 0; i < trials; ++i) {
		const auto p = ptype::random_positive_type(g, dim, derive_seed(rep.seed, 1000 + i));
		const auto sys = ptype::DilationSystem::build(p);
		double worst = 0.0, gap = 0.0;
		auto feed = [&](std::int64_t t, const std::vector<std::int64_t>& L) {
			const auto r = ptype::combined_check(sys, t, L);
			worst = std::max(worst, r.abs_err);
			gap = std::max(gap, r.ordering_gap);
		};
		if (n <= 8) {
			for (std::int64_t t = 0; t < n; ++t)
				for (std::int64_t mask = 0; mask < (std::int64_t(1) << n); ++mask) {
					std::vector<std::int64_t> L;
					for (std::int64_t x = 0; x < n; ++x)
						if (mask & (std::int64_t(1) << x)) L.push_back(x);
					feed(t, L);
				}
		} else {
			Rng rng(derive_seed(rep.seed, 2000 + i));
			for (int trial = 0; trial < 64; ++trial) {
				std::vector<std::int64_t> L;
				for (std::int64_t x = 0; x < n; ++x)
					if (rng.uniform() < 0.5) L.push_back(x);
				feed(rng.uniform_int(0, n - 1), L);
			}
		}
		const std::string tag = "/s" + std::to_string(i);
		add_check(rep, "combined" + tag, worst, tol, "slice-sum of phat",
		          "V* E(-L) u(t) V and V* u(t) E(-L) V");
		add_check(rep, "ordering" + tag, gap, ord_tol, "measure-first ordering",
		          "rep-first ordering");
	}

	for (std::int64_t j = 0; j < measure_trials; ++j) {
		const auto p = ptype::random_positive_type(g, dim, derive_seed(rep.seed, 3000 + j));
		const auto sys = ptype::DilationSystem::build(p);
		Rng rng(derive_seed(rep.seed, 4000 + j));
		const Vec xi = random_vector(rng, dim);
		const Vec eta = random_vector(rng, dim);
		const std::string tag = "/s" + std::to_string(j);
		add_check(rep, "measures" + tag, ptype::equal_measures_check(sys, xi, eta), measure_tol,
		          "<phat(-x) xi, eta> / |G|", "<E_x V xi, V eta>");
		std::vector<cplx> gfun(static_cast<std::size_t>(n));
		for (auto& v : gfun) v = rng.gaussian_complex();
		const auto b = ptype::babalu_check(sys, gfun, xi, eta);
		add_check(rep, "babalu" + tag, b.abs_err, measure_tol, "sum_t g(t) <p(t) xi, eta>",
		          "sum_x ghat(x) <E_x V xi, V eta>");
	}
}

void run_main_theorem(const Scenario& s, Report& rep) {
	const auto bundle = fell::fixture(get_string(s.params, "bundle", "m2z2"));
	const std::int64_t trials = get_int(s.params, "trials", 100);
	const double tol = get_double(s.params, "tol", 1e-10);
	const double hat_tol = get_double(s.params, "hat_tol", 1e-11);
	const double psd_tol = get_double(s.params, "psd_tol", 1e-10);
	const std::int64_t n = bundle->group.order();
	for (std::int64_t i = 0; i < trials; ++i) {
		const auto f = fell::random_section(bundle, derive_seed(rep.seed, 2 * i));
		const auto a = fell::random_section(bundle, derive_seed(rep.seed, 2 * i + 1));
		Rng rng(derive_seed(rep.seed, 5000 + i));
		const std::int64_t t = rng.uniform_int(0, n - 1);
		const auto r = fell::main_theorem_check(f, a, t);
		const std::string tag = "/s" + std::to_string(i);
		add_check(rep, "main" + tag, r.abs_err, tol, "integral of conj((t,x)) a alpha_x(p)",
		          "a P(t) and P(t) a", ucond::cert_status_name(r.certificate_status));
		add_check(rep, "main-cert" + tag, r.certificate_epsilon, 0.0, "certificate epsilon",
		          "0 (exact)", ucond::cert_status_name(r.certificate_status));
		const std::int64_t x = rng.uniform_int(0, n - 1);
		add_check(rep, "hat" + tag, fell::hat_equals_action_check(f, x), hat_tol,
		          "sum_s (s,x) F(s) on probes", "alpha_x(f) convolution");
		const auto v = fell::section_positive_type_check(f);
		add_check(rep, "positive-type" + tag, std::max(0.0, -v.min_eigenvalue), psd_tol,
		          "min eigenvalue " + num(v.min_eigenvalue), ">= 0");
	}
}

void run_alpha(const Scenario& s, Report& rep) {
	const auto bundle = fell::fixture(get_string(s.params, "bundle", "m2z2"));
	const std::int64_t trials = get_int(s.params, "trials", 50);
	const double tol = get_double(s.params, "tol", 1e-10);
	const auto world = action::FiniteWorld::from_bundle(*bundle);
	const std::int64_t n = bundle->group.order();

	for (std::int64_t i = 0; i < trials; ++i) {
		const auto f = fell::random_section(bundle, derive_seed(rep.seed, 100 + i));
		Rng rng(derive_seed(rep.seed, 500 + i));
		const std::int64_t x = rng.uniform_int(0, n - 1);
		const Mat lhs = fell::regular_representation(fell::dual_action(x, f));
		const Mat rhs = world.apply(x, fell::regular_representation(f));
		add_check(rep, "dual-action/s" + std::to_string(i), max_abs(Mat(lhs - rhs)), tol,
		          "Lambda(alpha_x(f))", "W_x Lambda(f) W_x*");
	}

	{
		Rng rng(derive_seed(rep.seed, 900));
		const Mat b = random_gaussian(rng, world.algebra_dim, world.algebra_dim);
		double law = 0.0;
		for (std::int64_t x = 0; x < n; ++x)
			for (std::int64_t y = 0; y < n; ++y)
				law = std::max(law, max_abs(Mat(world.apply(x, world.apply(y, b)) -
				                                world.apply(world.dual.add(x, y), b))));
		add_check(rep, "action-law", law, 1e-12, "alpha_x(alpha_y(b))", "alpha_{x+y}(b)");
	}

	const action::ZShiftWorld z;
	const action::SparseZOp b =
	    action::SparseZOp::unit(0, 0) + action::SparseZOp::unit(1, 3, cplx(2.0, 0.0));
	const double ts[3] = {0.0, 1.0, kPi};
	const char* names[3] = {"t0", "t1", "tpi"};
	for (int j = 0; j < 3; ++j) {
		const auto m = action::fourier_of_element(z, b, ts[j]);
		add_check(rep, std::string("zshift-subspace/") + names[j],
		          action::spectral_subspace_check(z, m, 6, {1, 2}), 1e-14,
		          "alpha_n(bhat(t)) entries", "exp(int) bhat(t) entries");
	}
	{
		std::vector<action::FactoredFunctional<action::SparseZOp>> fns;
		fns.push_back({[](const action::SparseZOp& v) { return v.trace(); },
		               action::SparseZOp::unit(0, 0)});
		fns.push_back({[](const action::SparseZOp& v) { return v.entry(1, 3); },
		               action::SparseZOp::unit(1, 1)});
		add_check(rep, "zshift-weak-integral", action::weak_integral_check(z, b, fns), 1e-12,
		          "swept functional sum", "functional of the integral");
	}
}

void run_unconditional(const Scenario& s, Report& rep) {
	const std::string example = get_string(s.params, "example", "basis-over-n");

	if (example == "basis-over-n") {
		const double eps = get_double(s.params, "eps", 1e-4);
		const auto f = instances::basis_over_n();
		auto res = ucond::u_integrate(f, eps);
		if (std::holds_alternative<ucond::Certificate<SeqVec>>(res)) {
			const auto& c = std::get<ucond::Certificate<SeqVec>>(res);
			const bool proof = c.status == ucond::CertStatus::Proof;
			add_check(rep, "certificate", proof ? 0.0 : 1.0, 0.0,
			          std::string("status ") + ucond::cert_status_name(c.status),
			          "proof via orthogonality oracle", ucond::cert_status_name(c.status));
			add_check(rep, "distance-to-limit", c.value.distance_to_reciprocal_limit(), eps,
			          "l2 gap to the full series", "requested eps",
			          ucond::cert_status_name(c.status));
		} else {
			const auto& v = std::get<ucond::CauchyViolation<SeqVec>>(res);
			add_check(rep, "certificate", 1.0, 0.0, "violation over " + v.set.brief(),
			          "proof via orthogonality oracle", "evidence");
		}
	} else if (example == "basis-over-n-squared") {
		const double eps = get_double(s.params, "eps", 1e-4);
		const auto f = instances::basis_over_n_squared();
		auto res = ucond::u_integrate(f, eps);
		const bool proof = std::holds_alternative<ucond::Certificate<SparseVec>>(res) &&
		                   std::get<ucond::Certificate<SparseVec>>(res).status ==
		                       ucond::CertStatus::Proof;
		add_check(rep, "certificate", proof ? 0.0 : 1.0, 0.0, "summable norms",
		          "proof via l1 oracle", proof ? "proof" : "evidence");
		const auto tail = ucond::uniform_tail_set(f, eps);
		add_check(rep, "uniform-tail-set", tail.is_empty() ? 1.0 : 0.0, 0.0,
		          "witness " + tail.brief(), "nonempty uniform witness");
	} else if (example == "alternating-harmonic") {
		const double eps = get_double(s.params, "eps", 1.0);
		const auto f = instances::alternating_harmonic();
		auto res = ucond::u_integrate(f, eps);
		const std::string want = "a local set with |partial| >= " + num(eps);
		if (std::holds_alternative<ucond::CauchyViolation<cplx>>(res)) {
			const auto& v = std::get<ucond::CauchyViolation<cplx>>(res);
			add_check(rep, "violation", std::max(0.0, eps - v.norm), 0.0,
			          "partial " + num(v.norm) + " over " + v.set.brief(), want, "evidence");
		} else {
			add_check(rep, "violation", 1.0, 0.0, "certificate produced", want, "evidence");
		}
	} else if (example == "sup-norm-basis") {
		const double eps = get_double(s.params, "eps", 0.5);
		const auto f = instances::sup_norm_basis();
		std::vector<ucond::LocalSet> sample = {
		    ucond::LocalSet::range(1, 1), ucond::LocalSet::range(1, 64),
		    ucond::LocalSet::from_points({2, 3, 5, 8, 13}), ucond::LocalSet::single(41)};
		const double pb = ucond::pseudo_bound(f, sample);
		add_check(rep, "pseudo-bound", std::abs(pb - 1.0), 0.0, "sup over sampled sets " + num(pb),
		          "exactly 1");
		auto res = ucond::u_integrate(f, eps);
		const bool violated = std::holds_alternative<ucond::CauchyViolation<SparseVec>>(res);
		add_check(rep, "violation", violated ? 0.0 : 1.0, 0.0,
		          violated ? "violation over " +
		                         std::get<ucond::CauchyViolation<SparseVec>>(res).set.brief()
		                   : "no violation found",
		          "single points beyond any witness keep sup norm 1", "evidence");
	} else {
		throw ValidationError("unknown example '" + example + "'");
	}
}

void run_laurent(const Scenario& s, Report& rep) {
	const std::int64_t window = get_int(s.params, "window", 20);
	const double tol = get_double(s.params, "tol", 1e-12);
	const double sub_tol = get_double(s.params, "subspace_tol", 1e-14);
	const action::ZShiftWorld z;
	const std::pair<const char*, action::SparseZOp> cases[3] = {
	    {"e00", action::SparseZOp::unit(0, 0)},
	    {"e01", action::SparseZOp::unit(0, 1)},
	    {"e00+2e13",
	     action::SparseZOp::unit(0, 0) + action::SparseZOp::unit(1, 3, cplx(2.0, 0.0))},
	};
	const double ts[3] = {0.0, 1.0, kPi};
	const char* tnames[3] = {"t0", "t1", "tpi"};
	for (const auto& [name, b] : cases) {
		for (int j = 0; j < 3; ++j) {
			const auto rec = action::laurent_recovery(b, ts[j], window);
			const std::string tag = std::string(name) + "/" + tnames[j];
			add_check(rep, "recover/" + tag, rec.max_err, tol, "direct windowed sum",
			          "twisted Laurent closed form");
			if (j == 0)
				add_check(rep, "toeplitz/" + std::string(name), rec.toeplitz_defect, 0.0,
				          "variation along diagonals", "0 (constant diagonals at t = 0)");
			add_check(rep, "subspace/" + tag,
			          action::spectral_subspace_check(z, rec.closed_form, 6, {1, 2}), sub_tol,
			          "alpha_n(bhat(t)) entries", "exp(int) bhat(t) entries");
		}
	}
}

void run_inequality(const Scenario& s, Report& rep) {
	const std::string world = get_string(s.params, "world", "both");
	const std::int64_t trials = get_int(s.params, "trials", 100);
	if (world != "finite" && world != "zshift" && world != "both")
		throw ValidationError("world must be finite, zshift, or both");

	if (world == "finite" || world == "both") {
		const auto bundle = fell::fixture(get_string(s.params, "bundle", "m2z2"));
		const auto sys = action::FiniteWorld::from_bundle(*bundle);
		const std::int64_t order = sys.dual.order();
		for (std::int64_t i = 0; i < trials; ++i) {
			Rng rng(derive_seed(rep.seed, 7000 + i));
			const int d = sys.algebra_dim;
			const Mat a = random_gaussian(rng, d, d), b = random_gaussian(rng, d, d);
			const Mat m = random_gaussian(rng, d, d), nn = random_gaussian(rng, d, d);
			std::vector<std::int64_t> L;
			for (std::int64_t x = 0; x < order; ++x)
				if (rng.uniform() < 0.5) L.push_back(x);
			const auto r = action::main_inequality_check(
			    sys, a, b, m, nn, ucond::LocalSet::from_points(std::move(L)));
			add_check(rep, "sqrt-form/finite/s" + std::to_string(i),
			          std::max(0.0, r.lhs - r.rhs_sqrt_form),
			          1e-10 * std::max(1.0, r.rhs_sqrt_form),
			          "lhs " + num(r.lhs) + ", printed form " +
			              (r.printed_ok ? "holds" : "fails") + " at " + num(r.rhs_printed_form),
			          "sqrt form " + num(r.rhs_sqrt_form));
		}
	}
	if (world == "zshift" || world == "both") {
		const action::ZShiftWorld sys;
		for (std::int64_t i = 0; i < trials; ++i) {
			Rng rng(derive_seed(rep.seed, 8000 + i));
			auto sample = [&rng]() {
				action::SparseZOp v;
				const int count = 3 + static_cast<int>(rng.uniform_int(0, 3));
				for (int k = 0; k < count; ++k)
					v += action::SparseZOp::unit(rng.uniform_int(-4, 4), rng.uniform_int(-4, 4),
					                             rng.gaussian_complex());
				return v;
			};
			const auto a = sample(), b = sample(), m = sample(), nn = sample();
			std::vector<std::int64_t> L;
			for (std::int64_t x = -8; x <= 8; ++x)
				if (rng.uniform() < 0.4) L.push_back(x);
			const auto r = action::main_inequality_check(
			    sys, a, b, m, nn, ucond::LocalSet::from_points(std::move(L)));
			add_check(rep, "sqrt-form/zshift/s" + std::to_string(i),
			          std::max(0.0, r.lhs - r.rhs_sqrt_form),
			          1e-10 * std::max(1.0, r.rhs_sqrt_form),
			          "lhs " + num(r.lhs) + ", printed form " +
			              (r.printed_ok ? "holds" : "fails") + " at " + num(r.rhs_printed_form),
			          "sqrt form " + num(r.rhs_sqrt_form));
		}
	}
}

void run_cone(const Scenario& s, Report& rep) {
	const std::string world = get_string(s.params, "world", "both");
	const std::int64_t trials = get_int(s.params, "trials", 20);
	const double eps = get_double(s.params, "eps", 1e-3);
	if (world != "finite" && world != "zshift" && world != "both")
		throw ValidationError("world must be finite, zshift, or both");

	auto add_cone_checks = [&](const std::string& tag, const action::ConeReport& r,
	                           const char* cert) {
		add_check(rep, "chain/" + tag, std::max(0.0, r.max_chain_slack), 1e-10,
		          "per-step chain slack", "0", cert);
		add_check(rep, "tail/" + tag, std::max(0.0, r.measured_tail - 2.0 * r.derived_epsilon),
		          1e-12,
		          "measured tail " + num(r.measured_tail) + " (eps_k " + num(r.epsilon_k) +
		              ", bound " + num(r.bound_m) + ")",
		          "2x derived epsilon " + num(2.0 * r.derived_epsilon), cert);
	};

	if (world == "finite" || world == "both") {
		const auto bundle = fell::fixture(get_string(s.params, "bundle", "m2z2"));
		const auto sys = action::FiniteWorld::from_bundle(*bundle);
		const int d = sys.algebra_dim;
		std::vector<ucond::LocalSet> exhaustion;
		for (std::int64_t j = 0; j < sys.dual.order(); ++j)
			exhaustion.push_back(ucond::LocalSet::range(0, j));
		for (std::int64_t i = 0; i < trials; ++i) {
			Rng rng(derive_seed(rep.seed, 9000 + i));
			const Mat g0 = random_gaussian(rng, d, d);
			const Mat k = g0 * g0.adjoint();
			Mat h;
			if (i % 3 == 0) {
				h = k;
			} else if (i % 3 == 1) {
				h = 0.5 * k;
			} else {
				Eigen::SelfAdjointEigenSolver<Mat> es(k);
				const Mat root = es.operatorSqrt();
				Vec w = random_vector(rng, d);
				w /= std::max(1.0, w.norm());
				const Vec v = root * w;
				h = v * v.adjoint();
			}
			const Mat c = random_gaussian(rng, d, d);
			const auto r = action::hereditary_cone_check(sys, h, k, c, exhaustion, eps);
			add_cone_checks("finite/s" + std::to_string(i), r,
			                r.epsilon_k == 0.0 ? "exact" : "proof");
		}
	}
	if (world == "zshift" || world == "both") {
		const action::ZShiftWorld sys;
		std::vector<ucond::LocalSet> exhaustion;
		const auto zspace = ucond::LocalIntegrationSpace::integers();
		for (std::int64_t kpt : {2, 4, 8, 16, 32, 64, 96})
			exhaustion.push_back(zspace.first_points(kpt));
		for (std::int64_t i = 0; i < trials; ++i) {
			Rng rng(derive_seed(rep.seed, 9500 + i));
			action::SparseZOp k, h;
			if (i % 3 == 2) {
				k = action::SparseZOp::unit(0, 0) + action::SparseZOp::unit(1, 1);
				action::SparseZOp e01 = action::SparseZOp::unit(0, 1, cplx(0.5, 0.0));
				h = action::SparseZOp::unit(0, 0, cplx(0.5, 0.0)) +
				    action::SparseZOp::unit(1, 1, cplx(0.5, 0.0)) + e01 + e01.adjoint();
			} else {
				const int terms = 24;
				for (int j = 0; j < terms; ++j)
					k += action::SparseZOp::unit(j, j, cplx(std::pow(2.0, -j), 0.0));
				h = (i % 3 == 0) ? k : k * cplx(0.5, 0.0);
			}
			action::SparseZOp c;
			for (int j = 0; j < 3; ++j)
				c += action::SparseZOp::unit(rng.uniform_int(0, 6), rng.uniform_int(-2, 2),
				                             rng.gaussian_complex());
			const auto r = action::hereditary_cone_check(sys, h, k, c, exhaustion, eps);
			add_cone_checks("zshift/s" + std::to_string(i), r,
			                r.epsilon_k == 0.0 ? "exact" : "proof");
		}
	}
}

}  // namespace

Scenario Scenario::from_json(const json& j) {
	if (!j.is_object()) throw ValidationError("scenario must be a JSON object");
	if (!j.contains("kind") || !j.at("kind").is_string())
		throw ValidationError("scenario needs a string 'kind'");
	Scenario s;
	s.kind = j.at("kind").get<std::string>();
	if (!param_schemas().count(s.kind))
		throw ValidationError("unknown scenario kind '" + s.kind + "'");
	if (j.contains("id")) {
		if (!j.at("id").is_string()) throw ValidationError("scenario 'id' must be a string");
		s.id = j.at("id").get<std::string>();
	} else {
		s.id = s.kind;
	}
	s.params = json::object();
	for (const auto& [key, value] : j.items())
		if (key != "kind" && key != "id") s.params[key] = value;
	validate_params(s.kind, s.params);
	return s;
}

Scenario Scenario::from_file(const std::string& path) {
	std::ifstream in(path);
	if (!in) throw ValidationError("cannot open scenario file " + path);
	json j;
	try {
		j = json::parse(in);
	} catch (const json::exception& e) {
		throw ValidationError("scenario file " + path + " is not valid JSON: " + e.what());
	}
	return from_json(j);
}

json Report::to_json() const {
	json j;
	j["id"] = id;
	j["version"] = version;
	j["seed"] = seed;
	json arr = json::array();
	for (const CheckRecord& c : checks) {
		json jc;
		jc["name"] = c.name;
		jc["lhs_summary"] = c.lhs_summary;
		jc["rhs_summary"] = c.rhs_summary;
		jc["abs_err"] = c.abs_err;
		jc["tol"] = c.tol;
		jc["pass"] = c.pass;
		jc["certificate_status"] = c.certificate_status;
		arr.push_back(std::move(jc));
	}
	j["checks"] = std::move(arr);
	j["pass"] = pass;
	j["wall_time_ms"] = wall_time_ms;
	return j;
}

std::vector<std::string> scenario_kinds() {
	std::vector<std::string> out;
	for (const auto& [kind, schema] : param_schemas()) {
		(void)schema;
		out.push_back(kind);
	}
	return out;
}

std::string params_schema(const std::string& kind) {
	auto it = param_schemas().find(kind);
	if (it == param_schemas().end())
		throw ValidationError("unknown scenario kind '" + kind + "'");
	std::ostringstream os;
	bool first = true;
	for (const auto& [key, type] : it->second) {
		os << (first ? "" : " ") << "--" << key << " "
		   << (type == 's' ? "STR" : type == 'i' ? "N" : "F");
		first = false;
	}
	return os.str();
}

Report run(const Scenario& scenario) {
	validate_params(scenario.kind, scenario.params);
	const auto start = std::chrono::steady_clock::now();
	Report rep;
	rep.id = scenario.id;
	rep.seed = static_cast<std::uint64_t>(get_int(scenario.params, "seed", 42));

	if (scenario.kind == "inversion") run_inversion(scenario, rep);
	else if (scenario.kind == "naimark") run_naimark(scenario, rep);
	else if (scenario.kind == "combined") run_combined(scenario, rep);
	else if (scenario.kind == "main-theorem") run_main_theorem(scenario, rep);
	else if (scenario.kind == "alpha") run_alpha(scenario, rep);
	else if (scenario.kind == "unconditional") run_unconditional(scenario, rep);
	else if (scenario.kind == "laurent") run_laurent(scenario, rep);
	else if (scenario.kind == "inequality") run_inequality(scenario, rep);
	else if (scenario.kind == "cone") run_cone(scenario, rep);
	else throw ValidationError("unknown scenario kind '" + scenario.kind + "'");

	const auto end = std::chrono::steady_clock::now();
	rep.wall_time_ms = std::chrono::duration<double, std::milli>(end - start).count();
	return rep;
}

std::string fixture_listing(const std::string& fixtures_dir) {
	std::ostringstream os;
	os << "Bundle fixtures:\n";
	os << "  m2z2      parity grading of the 2x2 matrices (ambient 2, group 2)\n";
	os << "  z3-shift  cyclic shift on the diagonal of the 3x3 matrices (ambient 9, group 3)\n";
	os << "Counterexample instances:\n";
	os << "  basis-over-n          e_n/n in l2; orthogonality tail oracle, u-integrable\n";
	os << "  basis-over-n-squared  e_n/n^2 in l2; summable norms, uniform tail sets\n";
	os << "  alternating-harmonic  (-1)^n/n scalar; no oracle, engine finds the violation\n";
	os << "  sup-norm-basis        e_n in sup norm; pseudo-bounded, never u-integrable\n";
	os << "Scenario kinds:\n";
	for (const std::string& kind : scenario_kinds())
		os << "  " << kind << std::string(kind.size() < 14 ? 14 - kind.size() : 1, ' ')
		   << params_schema(kind) << "\n";

	if (!fixtures_dir.empty()) {
		os << "User fixtures in " << fixtures_dir << ":\n";
		std::error_code ec;
		std::vector<std::filesystem::path> files;
		for (const auto& entry : std::filesystem::directory_iterator(fixtures_dir, ec))
			if (entry.path().extension() == ".json") files.push_back(entry.path());
		if (ec) {
			os << "  (cannot read directory: " << ec.message() << ")\n";
			return os.str();
		}
		std::sort(files.begin(), files.end());
		if (files.empty()) os << "  (none)\n";
		for (const auto& path : files) {
			try {
				const Scenario s = Scenario::from_file(path.string());
				os << "  " << path.filename().string() << "  ok (kind " << s.kind << ", id "
				   << s.id << ")\n";
			} catch (const ValidationError& e) {
				os << "  " << path.filename().string() << "  warning: " << e.what() << "\n";
			}
		}
	}
	return os.str();
}

}  // namespace ulab::lab
