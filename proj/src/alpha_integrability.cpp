#include "ulab/alpha_integrability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "ulab/errors.hpp"
#include "ulab/rng.hpp"

namespace ulab::action {

namespace {

constexpr double kLawTol = 1e-12;

std::vector<std::int64_t> sorted_unique(std::vector<std::int64_t> v) {
	std::sort(v.begin(), v.end());
	v.erase(std::unique(v.begin(), v.end()), v.end());
	return v;
}

std::size_t pos_of(const std::vector<std::int64_t>& sorted, std::int64_t p) {
	return static_cast<std::size_t>(
	    std::lower_bound(sorted.begin(), sorted.end(), p) - sorted.begin());
}

// n-values where alpha_n(b) can meet a in a product; everything else is zero.
std::vector<std::int64_t> shift_window(const SparseZOp& b, const SparseZOp& a, Side side) {
	std::set<std::int64_t> out;
	for (const auto& [ak, av] : a.entries) {
		(void)av;
		for (const auto& [bk, bv] : b.entries) {
			(void)bv;
			if (side == Side::Left)
				out.insert(ak.first - bk.second);   // rows(a) - cols(b)
			else
				out.insert(ak.second - bk.first);   // cols(a) - rows(b)
		}
	}
	return {out.begin(), out.end()};
}

Mat dense_square(const SparseZOp& m) {
	std::vector<std::int64_t> idx = m.row_indices();
	const std::vector<std::int64_t> cols = m.col_indices();
	idx.insert(idx.end(), cols.begin(), cols.end());
	idx = sorted_unique(std::move(idx));
	Mat d = Mat::Zero(static_cast<Eigen::Index>(idx.size()), static_cast<Eigen::Index>(idx.size()));
	for (const auto& [k, v] : m.entries)
		d(static_cast<Eigen::Index>(pos_of(idx, k.first)),
		  static_cast<Eigen::Index>(pos_of(idx, k.second))) = v;
	return d;
}

double l1_of_entries(const SparseZOp& m) {
	double s = 0.0;
	for (const auto& [k, v] : m.entries) {
		(void)k;
		s += std::abs(v);
	}
	return s;
}

Mat adj_of(const Mat& m) { return m.adjoint(); }
SparseZOp adj_of(const SparseZOp& m) { return m.adjoint(); }

double norm_of(const Mat& m) { return operator_norm(m); }
double norm_of(const SparseZOp& m) { return m.op_norm(); }

double hermitian_defect_of(const Mat& m) { return max_abs(Mat(m - m.adjoint())); }
double hermitian_defect_of(const SparseZOp& m) { return (m - m.adjoint()).max_abs_entry(); }

double min_eig_of(const Mat& m) { return min_eigenvalue_hermitian(m); }
double min_eig_of(const SparseZOp& m) {
	if (m.empty()) return 0.0;
	return min_eigenvalue_hermitian(dense_square(m));
}

void require_element(const FiniteWorld& sys, const Mat& m, const char* what) {
	if (m.rows() != sys.algebra_dim || m.cols() != sys.algebra_dim)
		throw WorldMismatch(std::string(what) + ": expected a " +
		                    std::to_string(sys.algebra_dim) + "x" +
		                    std::to_string(sys.algebra_dim) + " element");
}

}  // namespace

SparseZOp SparseZOp::unit(std::int64_t i, std::int64_t j, cplx c) {
	SparseZOp m;
	m.entries[{i, j}] = c;
	m.prune();
	return m;
}

cplx SparseZOp::entry(std::int64_t i, std::int64_t j) const {
	auto it = entries.find({i, j});
	return it == entries.end() ? cplx(0.0, 0.0) : it->second;
}

void SparseZOp::prune() {
	for (auto it = entries.begin(); it != entries.end();)
		it = (std::abs(it->second) == 0.0) ? entries.erase(it) : std::next(it);
}

SparseZOp& SparseZOp::operator+=(const SparseZOp& other) {
	for (const auto& [k, v] : other.entries) entries[k] += v;
	prune();
	return *this;
}

SparseZOp operator-(const SparseZOp& a, const SparseZOp& b) {
	return a + b * cplx(-1.0, 0.0);
}

SparseZOp operator*(const SparseZOp& a, cplx c) {
	SparseZOp out;
	for (const auto& [k, v] : a.entries) out.entries[k] = v * c;
	out.prune();
	return out;
}

SparseZOp operator*(const SparseZOp& a, const SparseZOp& b) {
	std::map<std::int64_t, std::vector<std::pair<std::int64_t, cplx>>> rows_of_b;
	for (const auto& [k, v] : b.entries) rows_of_b[k.first].emplace_back(k.second, v);
	SparseZOp out;
	for (const auto& [k, v] : a.entries) {
		auto it = rows_of_b.find(k.second);
		if (it == rows_of_b.end()) continue;
		for (const auto& [col, w] : it->second) out.entries[{k.first, col}] += v * w;
	}
	out.prune();
	return out;
}

SparseZOp SparseZOp::adjoint() const {
	SparseZOp out;
	for (const auto& [k, v] : entries) out.entries[{k.second, k.first}] = std::conj(v);
	return out;
}

SparseZOp SparseZOp::shifted(std::int64_t n) const {
	SparseZOp out;
	for (const auto& [k, v] : entries) out.entries[{k.first + n, k.second + n}] = v;
	return out;
}

cplx SparseZOp::trace() const {
	cplx s(0.0, 0.0);
	for (const auto& [k, v] : entries)
		if (k.first == k.second) s += v;
	return s;
}

std::vector<std::int64_t> SparseZOp::row_indices() const {
	std::vector<std::int64_t> out;
	out.reserve(entries.size());
	for (const auto& [k, v] : entries) {
		(void)v;
		out.push_back(k.first);
	}
	return sorted_unique(std::move(out));
}

std::vector<std::int64_t> SparseZOp::col_indices() const {
	std::vector<std::int64_t> out;
	out.reserve(entries.size());
	for (const auto& [k, v] : entries) {
		(void)v;
		out.push_back(k.second);
	}
	return sorted_unique(std::move(out));
}

double SparseZOp::op_norm() const {
	if (entries.empty()) return 0.0;
	const std::vector<std::int64_t> rows = row_indices();
	const std::vector<std::int64_t> cols = col_indices();
	Mat d = Mat::Zero(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
	for (const auto& [k, v] : entries)
		d(static_cast<Eigen::Index>(pos_of(rows, k.first)),
		  static_cast<Eigen::Index>(pos_of(cols, k.second))) = v;
	return operator_norm(d);
}

double SparseZOp::max_abs_entry() const {
	double m = 0.0;
	for (const auto& [k, v] : entries) {
		(void)k;
		m = std::max(m, std::abs(v));
	}
	return m;
}

cplx TwistedLaurentOp::entry(std::int64_t r, std::int64_t c) const {
	auto it = gamma.find(r - c);
	if (it == gamma.end()) return cplx(0.0, 0.0);
	return std::polar(1.0, -static_cast<double>(r) * t) * it->second;
}

SparseZOp TwistedLaurentOp::left_apply(const SparseZOp& a) const {
	SparseZOp out;
	for (const auto& [k, v] : a.entries)
		for (const auto& [m, g] : gamma) {
			const std::int64_t row = k.first + m;
			out.entries[{row, k.second}] +=
			    std::polar(1.0, -static_cast<double>(row) * t) * g * v;
		}
	out += SparseZOp{};  // prune via the add path
	return out;
}

SparseZOp TwistedLaurentOp::right_apply(const SparseZOp& a) const {
	SparseZOp out;
	for (const auto& [k, v] : a.entries)
		for (const auto& [m, g] : gamma)
			out.entries[{k.first, k.second - m}] +=
			    v * std::polar(1.0, -static_cast<double>(k.second) * t) * g;
	out += SparseZOp{};
	return out;
}

SparseZOp TwistedLaurentOp::window(std::int64_t n) const {
	SparseZOp out;
	for (const auto& [m, g] : gamma) {
		(void)g;
		const std::int64_t lo = std::max(-n, m - n);
		const std::int64_t hi = std::min(n, m + n);
		for (std::int64_t r = lo; r <= hi; ++r) out.entries[{r, r - m}] = entry(r, r - m);
	}
	out += SparseZOp{};
	return out;
}

Mat FiniteWorld::apply(std::int64_t x, const Mat& b) const {
	if (x < 0 || x >= static_cast<std::int64_t>(unitaries.size()))
		throw WorldMismatch("character index " + std::to_string(x) + " outside the dual group");
	require_element(*this, b, "apply");
	const Mat& u = unitaries[static_cast<std::size_t>(x)];
	return u * b * u.adjoint();
}

FiniteWorld FiniteWorld::from_unitaries(abelian::FiniteAbelianGroup dual, std::vector<Mat> unitaries) {
	FiniteWorld w;
	w.dual = std::move(dual);
	if (static_cast<std::int64_t>(unitaries.size()) != w.dual.order())
		throw WorldMismatch("expected one unitary per character, got " +
		                    std::to_string(unitaries.size()));
	const Eigen::Index d = unitaries.front().rows();
	for (const Mat& u : unitaries)
		if (u.rows() != d || u.cols() != d)
			throw WorldMismatch("action unitaries differ in size");
	const Mat eye = Mat::Identity(d, d);
	for (std::size_t x = 0; x < unitaries.size(); ++x)
		if (max_abs(Mat(unitaries[x].adjoint() * unitaries[x] - eye)) > kLawTol)
			throw NotUnitary("action generator " + std::to_string(x) + " is not unitary");
	for (std::size_t x = 0; x < unitaries.size(); ++x)
		for (std::size_t y = 0; y < unitaries.size(); ++y) {
			const std::int64_t z = w.dual.add(static_cast<std::int64_t>(x),
			                                  static_cast<std::int64_t>(y));
			if (max_abs(Mat(unitaries[x] * unitaries[y] -
			                unitaries[static_cast<std::size_t>(z)])) > kLawTol)
				throw NotHomomorphism("unitaries at " + std::to_string(x) + " and " +
				                      std::to_string(y) + " break the group law");
		}
	w.algebra_dim = static_cast<int>(d);
	w.unitaries = std::move(unitaries);
	return w;
}

FiniteWorld FiniteWorld::from_bundle(const fell::FellBundle& bundle) {
	const std::int64_t n = bundle.group.order();
	std::vector<Mat> us;
	us.reserve(static_cast<std::size_t>(n));
	for (std::int64_t x = 0; x < n; ++x) us.push_back(fell::dual_action_unitary(bundle, x));
	return from_unitaries(bundle.group, std::move(us));
}

Mat alpha_apply(const FiniteWorld& sys, std::int64_t x, const Mat& b) { return sys.apply(x, b); }

SparseZOp alpha_apply(const ZShiftWorld& sys, std::int64_t n, const SparseZOp& b) {
	return sys.apply(n, b);
}

namespace {

template <class V>
AlphaIntegral<V> settle(ucond::UResult<V> res) {
	if (std::holds_alternative<ucond::CauchyViolation<V>>(res)) {
		const auto& v = std::get<ucond::CauchyViolation<V>>(res);
		throw CauchyFailureError("partial integral over " + v.set.brief() + " has norm " +
		                         std::to_string(v.norm) + ", breaking the Cauchy condition");
	}
	auto& c = std::get<ucond::Certificate<V>>(res);
	return {std::move(c.value), std::move(c.witness), c.epsilon, c.status};
}

}  // namespace

AlphaIntegral<Mat> alpha_integral(const FiniteWorld& sys, const Mat& b, const Mat& a,
                                  Side side, const Weight& phi) {
	require_element(sys, b, "alpha_integral");
	require_element(sys, a, "alpha_integral");
	const std::int64_t n = sys.dual.order();
	ucond::VectorField<Mat> f;
	f.space = ucond::LocalIntegrationSpace::finite(n, 1.0 / static_cast<double>(n));
	f.zero = Mat::Zero(sys.algebra_dim, sys.algebra_dim);
	f.norm = [](const Mat& m) { return frobenius(m); };
	f.value = [&sys, &b, &a, side, &phi](std::int64_t x) {
		const Mat moved = sys.apply(x, b);
		Mat term = (side == Side::Left) ? Mat(moved * a) : Mat(a * moved);
		if (phi) term *= phi(x);
		return term;
	};
	f.tail = ucond::TailOracle{ucond::OracleKind::FiniteSupport,
	                           [n](double) { return ucond::LocalSet::range(0, n - 1); }};
	return settle(ucond::u_integrate(f, 1e-12, 8, 0xa1fa));
}

AlphaIntegral<SparseZOp> alpha_integral(const ZShiftWorld& sys, const SparseZOp& b,
                                        const SparseZOp& a, Side side, const Weight& phi) {
	const std::vector<std::int64_t> window = shift_window(b, a, side);
	ucond::VectorField<SparseZOp> f;
	f.space = ucond::LocalIntegrationSpace::integers();
	f.zero = SparseZOp{};
	f.norm = [](const SparseZOp& m) { return m.op_norm(); };
	f.value = [&sys, &b, &a, side, &phi](std::int64_t n) {
		const SparseZOp moved = sys.apply(n, b);
		SparseZOp term = (side == Side::Left) ? moved * a : a * moved;
		if (phi) term = term * phi(n);
		return term;
	};
	f.tail = ucond::TailOracle{ucond::OracleKind::FiniteSupport, [window](double) {
		                           return ucond::LocalSet::from_points(window);
	                           }};
	return settle(ucond::u_integrate(f, 1e-12, 8, 0xa1fa));
}

FiniteMultiplier fourier_of_element(const FiniteWorld& sys, const Mat& b, std::int64_t t) {
	require_element(sys, b, "fourier_of_element");
	if (t < 0 || t >= sys.dual.order())
		throw WorldMismatch("group index " + std::to_string(t) + " outside the group");
	FiniteMultiplier m;
	m.left = [sys, b, t](const Mat& a) {
		const Weight phi = [&sys, t](std::int64_t x) {
			return std::conj(abelian::pairing(sys.dual, t, x));
		};
		return alpha_integral(sys, b, a, Side::Left, phi).value;
	};
	m.right = [sys, b, t](const Mat& a) {
		const Weight phi = [&sys, t](std::int64_t x) {
			return std::conj(abelian::pairing(sys.dual, t, x));
		};
		return alpha_integral(sys, b, a, Side::Right, phi).value;
	};
	return m;
}

TwistedLaurentOp fourier_of_element(const ZShiftWorld& sys, const SparseZOp& b, double t) {
	TwistedLaurentOp out;
	out.t = t;
	for (const auto& [k, v] : b.entries)
		out.gamma[k.first - k.second] += std::polar(1.0, static_cast<double>(k.first) * t) * v;
	for (auto it = out.gamma.begin(); it != out.gamma.end();)
		it = (std::abs(it->second) == 0.0) ? out.gamma.erase(it) : std::next(it);

	// The closed form must act exactly like the weighted integral; probe a few
	// rank-one operators and refuse the construction on any mismatch.
	std::set<std::int64_t> anchors = {-1, 0, 1};
	for (const auto& [k, v] : b.entries) {
		(void)v;
		if (anchors.size() >= 6) break;
		anchors.insert(k.second);
	}
	const double scale = std::max(1.0, l1_of_entries(b));
	const Weight phi = [t](std::int64_t n) {
		return std::polar(1.0, -static_cast<double>(n) * t);
	};
	for (std::int64_t j : anchors) {
		const SparseZOp probe = SparseZOp::unit(j, j);
		const SparseZOp left_direct = alpha_integral(sys, b, probe, Side::Left, phi).value;
		const SparseZOp right_direct = alpha_integral(sys, b, probe, Side::Right, phi).value;
		const double dl = (out.left_apply(probe) - left_direct).max_abs_entry();
		const double dr = (out.right_apply(probe) - right_direct).max_abs_entry();
		if (dl > 1e-12 * scale || dr > 1e-12 * scale)
			throw Error("twisted Laurent closed form disagrees with the direct integral");
	}
	return out;
}

double spectral_subspace_check(const FiniteWorld& sys, const FiniteMultiplier& m,
                               std::int64_t t, const std::vector<Mat>& probes) {
	if (t < 0 || t >= sys.dual.order())
		throw WorldMismatch("group index " + std::to_string(t) + " outside the group");
	double worst = 0.0;
	for (std::int64_t x = 0; x < sys.dual.order(); ++x) {
		const cplx phase = abelian::pairing(sys.dual, t, x);
		for (const Mat& a : probes) {
			require_element(sys, a, "spectral_subspace_check");
			const Mat pulled = sys.apply(sys.dual.neg(x), a);
			const Mat left_lhs = sys.apply(x, m.left(pulled));
			const Mat right_lhs = sys.apply(x, m.right(pulled));
			worst = std::max(worst, max_abs(Mat(left_lhs - phase * m.left(a))));
			worst = std::max(worst, max_abs(Mat(right_lhs - phase * m.right(a))));
		}
	}
	return worst;
}

double spectral_subspace_check(const ZShiftWorld&, const TwistedLaurentOp& m,
                               std::int64_t window, const std::vector<std::int64_t>& shifts) {
	double worst = 0.0;
	for (std::int64_t n : shifts) {
		const cplx phase = std::polar(1.0, static_cast<double>(n) * m.t);
		for (std::int64_t r = -window; r <= window; ++r)
			for (std::int64_t c = -window; c <= window; ++c)
				worst = std::max(worst, std::abs(m.entry(r - n, c - n) - phase * m.entry(r, c)));
	}
	return worst;
}

double weak_integral_check(const FiniteWorld& sys, const Mat& b,
                           const std::vector<FactoredFunctional<Mat>>& functionals) {
	require_element(sys, b, "weak_integral_check");
	const double mass = 1.0 / static_cast<double>(sys.dual.order());
	double worst = 0.0;
	for (const auto& fn : functionals) {
		require_element(sys, fn.a, "weak_integral_check");
		cplx swept(0.0, 0.0);
		for (std::int64_t x = 0; x < sys.dual.order(); ++x)
			swept += fn.g(Mat(fn.a * sys.apply(x, b))) * mass;
		const cplx bulk = fn.g(alpha_integral(sys, b, fn.a, Side::Right).value);
		worst = std::max(worst, std::abs(swept - bulk));
	}
	return worst;
}

double weak_integral_check(const ZShiftWorld& sys, const SparseZOp& b,
                           const std::vector<FactoredFunctional<SparseZOp>>& functionals) {
	double worst = 0.0;
	for (const auto& fn : functionals) {
		cplx swept(0.0, 0.0);
		for (std::int64_t n : shift_window(b, fn.a, Side::Right))
			swept += fn.g(fn.a * sys.apply(n, b));
		const cplx bulk = fn.g(alpha_integral(sys, b, fn.a, Side::Right).value);
		worst = std::max(worst, std::abs(swept - bulk));
	}
	return worst;
}

namespace {

template <class Sys, class E>
InequalityReport inequality_impl(const Sys& sys, const E& a, const E& b, const E& m,
                                 const E& n, const ucond::LocalSet& L,
                                 const ucond::LocalIntegrationSpace& sp, double mass,
                                 const E& zero) {
	if (!sp.local(L)) throw NotLocal("set " + L.brief() + " is not local in this space");
	const E ab = adj_of(a) * b;
	const E aa = adj_of(a) * a;
	const E bb = adj_of(b) * b;
	const E ma = adj_of(m);
	const E na = adj_of(n);
	E cross = zero, left_sq = zero, right_sq = zero;
	L.for_each([&](std::int64_t x) {
		cross += ma * sys.apply(x, ab) * n * mass;
		left_sq += ma * sys.apply(x, aa) * m * mass;
		right_sq += na * sys.apply(x, bb) * n * mass;
	});
	InequalityReport rep;
	rep.lhs = norm_of(cross);
	rep.rhs_sqrt_form = std::sqrt(norm_of(left_sq)) * std::sqrt(norm_of(right_sq));
	rep.rhs_printed_form = norm_of(left_sq) * norm_of(right_sq);
	rep.ok = rep.lhs <= rep.rhs_sqrt_form + 1e-10 * std::max(1.0, rep.rhs_sqrt_form);
	rep.printed_ok = rep.lhs <= rep.rhs_printed_form + 1e-10 * std::max(1.0, rep.rhs_printed_form);
	return rep;
}

}  // namespace

InequalityReport main_inequality_check(const FiniteWorld& sys, const Mat& a, const Mat& b,
                                       const Mat& m, const Mat& n, const ucond::LocalSet& L) {
	require_element(sys, a, "main_inequality_check");
	require_element(sys, b, "main_inequality_check");
	require_element(sys, m, "main_inequality_check");
	require_element(sys, n, "main_inequality_check");
	const std::int64_t order = sys.dual.order();
	const auto sp = ucond::LocalIntegrationSpace::finite(order, 1.0 / static_cast<double>(order));
	return inequality_impl(sys, a, b, m, n, L, sp, 1.0 / static_cast<double>(order),
	                       Mat(Mat::Zero(sys.algebra_dim, sys.algebra_dim)));
}

InequalityReport main_inequality_check(const ZShiftWorld& sys, const SparseZOp& a,
                                       const SparseZOp& b, const SparseZOp& m,
                                       const SparseZOp& n, const ucond::LocalSet& L) {
	return inequality_impl(sys, a, b, m, n, L, ucond::LocalIntegrationSpace::integers(), 1.0,
	                       SparseZOp{});
}

namespace {

template <class Sys, class E>
ConeReport cone_impl(const Sys& sys, const E& h, const E& k, const E& c,
                     const std::vector<ucond::LocalSet>& exhaustion, double eps_request,
                     const std::vector<std::int64_t>& support, double mass, double bound_m,
                     const ucond::LocalIntegrationSpace& sp, const E& zero) {
	const double scale = std::max(1.0, norm_of(k));
	if (hermitian_defect_of(h) > kLawTol * scale || min_eig_of(h) < -kLawTol * scale)
		throw NotPositive("h is not positive semidefinite");
	if (hermitian_defect_of(k) > kLawTol * scale || min_eig_of(E(k - h)) < -kLawTol * scale)
		throw NotDominated("k does not dominate h");

	// Compressed k-terms, peeled farthest-out first while the removed l1 mass
	// stays within the requested epsilon. The rest is the witness.
	const E ca = adj_of(c);
	std::vector<double> term_norm(support.size());
	for (std::size_t i = 0; i < support.size(); ++i)
		term_norm[i] = norm_of(E(ca * sys.apply(support[i], k) * c * mass));
	std::vector<std::size_t> peel_order(support.size());
	for (std::size_t i = 0; i < peel_order.size(); ++i) peel_order[i] = i;
	std::sort(peel_order.begin(), peel_order.end(), [&](std::size_t x, std::size_t y) {
		const std::int64_t px = support[x], py = support[y];
		if (std::abs(static_cast<std::int64_t>(px)) != std::abs(static_cast<std::int64_t>(py))) return std::abs(static_cast<std::int64_t>(px)) > std::abs(static_cast<std::int64_t>(py));
		return px > py;
	});
	double eps_k = 0.0;
	std::set<std::int64_t> peeled;
	for (std::size_t i : peel_order) {
		if (eps_k + term_norm[i] > eps_request) break;
		eps_k += term_norm[i];
		peeled.insert(support[i]);
	}
	std::vector<std::int64_t> kept;
	for (std::int64_t p : support)
		if (!peeled.count(p)) kept.push_back(p);

	ConeReport rep;
	rep.witness = ucond::LocalSet::from_points(kept);
	rep.epsilon_k = eps_k;
	rep.bound_m = bound_m;
	rep.derived_epsilon = std::sqrt(bound_m * eps_k);

	// Per-step chain: the compressed h-integral sits under the geometric mean
	// of its two squares, which domination pushes up to the k-side quantities.
	rep.chain_ok = true;
	for (const ucond::LocalSet& L : exhaustion) {
		if (!sp.local(L)) throw NotLocal("exhaustion set " + L.brief() + " is not local");
		E hc = zero, hfull = zero, hcc = zero, kfull = zero, kcc = zero;
		L.for_each([&](std::int64_t x) {
			const E ah = sys.apply(x, h);
			const E ak = sys.apply(x, k);
			hc += ah * c * mass;
			hfull += ah * mass;
			hcc += ca * ah * c * mass;
			kfull += ak * mass;
			kcc += ca * ak * c * mass;
		});
		const double lhs = norm_of(hc);
		const double mid = std::sqrt(norm_of(hfull)) * std::sqrt(norm_of(hcc));
		const double rhs = std::sqrt(norm_of(kfull)) * std::sqrt(norm_of(kcc));
		const double slack = std::max(lhs - mid, mid - rhs);
		rep.max_chain_slack = std::max(rep.max_chain_slack, slack);
		if (slack > 1e-10 * std::max(1.0, rhs)) rep.chain_ok = false;
	}

	// Probe the actual h-tail on sets disjoint from the witness.
	std::vector<ucond::LocalSet> probes;
	if (!peeled.empty()) {
		std::vector<std::int64_t> rest(peeled.begin(), peeled.end());
		probes.push_back(ucond::LocalSet::from_points(rest));
		for (std::size_t i = 0; i < rest.size() && i < 64; ++i)
			probes.push_back(ucond::LocalSet::single(rest[i]));
		Rng rng(0xc0de);
		for (int trial = 0; trial < 16; ++trial) {
			std::vector<std::int64_t> sub;
			for (std::int64_t p : rest)
				if (rng.uniform() < 0.5) sub.push_back(p);
			if (!sub.empty()) probes.push_back(ucond::LocalSet::from_points(std::move(sub)));
		}
	}
	if (sp.kind == ucond::SpaceKind::Integers) {
		std::int64_t far = 1;
		for (std::int64_t p : support) far = std::max(far, std::abs(static_cast<std::int64_t>(p)));
		for (std::int64_t p : {far + 1, far + 2, -(far + 1)})
			probes.push_back(ucond::LocalSet::single(p));
	}
	for (const ucond::LocalSet& D : probes) {
		E part = zero;
		D.for_each([&](std::int64_t x) { part += sys.apply(x, h) * c * mass; });
		rep.measured_tail = std::max(rep.measured_tail, norm_of(part));
	}
	return rep;
}

}  // namespace

ConeReport hereditary_cone_check(const FiniteWorld& sys, const Mat& h, const Mat& k,
                                 const Mat& c, const std::vector<ucond::LocalSet>& exhaustion,
                                 double eps_request) {
	require_element(sys, h, "hereditary_cone_check");
	require_element(sys, k, "hereditary_cone_check");
	require_element(sys, c, "hereditary_cone_check");
	const std::int64_t order = sys.dual.order();
	const double mass = 1.0 / static_cast<double>(order);
	std::vector<std::int64_t> support(static_cast<std::size_t>(order));
	for (std::int64_t x = 0; x < order; ++x) support[static_cast<std::size_t>(x)] = x;
	Mat mean = Mat::Zero(sys.algebra_dim, sys.algebra_dim);
	for (std::int64_t x = 0; x < order; ++x) mean += sys.apply(x, k) * mass;
	return cone_impl(sys, h, k, c, exhaustion, eps_request, support, mass, operator_norm(mean),
	                 ucond::LocalIntegrationSpace::finite(order, mass),
	                 Mat(Mat::Zero(sys.algebra_dim, sys.algebra_dim)));
}

ConeReport hereditary_cone_check(const ZShiftWorld& sys, const SparseZOp& h, const SparseZOp& k,
                                 const SparseZOp& c, const std::vector<ucond::LocalSet>& exhaustion,
                                 double eps_request) {
	// Windows: the compressed k-field lives where shifted k-support meets the
	// rows of c; every partial sum of alpha(k) is a band operator bounded by
	// the l1 mass of its diagonal sums.
	std::set<std::int64_t> win;
	std::vector<std::int64_t> kidx = k.row_indices();
	const std::vector<std::int64_t> kcols = k.col_indices();
	kidx.insert(kidx.end(), kcols.begin(), kcols.end());
	for (std::int64_t p : c.row_indices())
		for (std::int64_t q : kidx) win.insert(p - q);
	std::map<std::int64_t, cplx> diag_sum;
	for (const auto& [key, v] : k.entries) diag_sum[key.first - key.second] += v;
	double l1 = 0.0;
	for (const auto& [m, v] : diag_sum) {
		(void)m;
		l1 += std::abs(v);
	}
	return cone_impl(sys, h, k, c, exhaustion, eps_request,
	                 std::vector<std::int64_t>(win.begin(), win.end()), 1.0, l1,
	                 ucond::LocalIntegrationSpace::integers(), SparseZOp{});
}

LaurentRecovery laurent_recovery(const SparseZOp& b, double t, std::int64_t window) {
	LaurentRecovery out;
	out.closed_form = fourier_of_element(ZShiftWorld{}, b, t);

	SparseZOp direct;
	std::int64_t radius = 0;
	for (const auto& [k, v] : b.entries) {
		radius = std::max({radius, std::abs(static_cast<std::int64_t>(k.first)), std::abs(static_cast<std::int64_t>(k.second))});
		const std::int64_t lo = -window - std::min(k.first, k.second);
		const std::int64_t hi = window - std::max(k.first, k.second);
		for (std::int64_t n = lo; n <= hi; ++n)
			direct.entries[{k.first + n, k.second + n}] +=
			    std::polar(1.0, -static_cast<double>(n) * t) * v;
	}

	const std::int64_t interior = window - radius;
	for (std::int64_t r = -interior; r <= interior; ++r)
		for (std::int64_t c = -interior; c <= interior; ++c)
			out.max_err = std::max(out.max_err,
			                       std::abs(direct.entry(r, c) - out.closed_form.entry(r, c)));

	for (const auto& [m, g] : out.closed_form.gamma) {
		(void)g;
		bool have_first = false;
		cplx first(0.0, 0.0);
		for (std::int64_t r = -interior; r <= interior; ++r) {
			if (r - m < -interior || r - m > interior) continue;
			const cplx e = direct.entry(r, r - m);
			if (!have_first) {
				first = e;
				have_first = true;
			} else {
				out.toeplitz_defect = std::max(out.toeplitz_defect, std::abs(e - first));
			}
		}
	}
	return out;
}

}  // namespace ulab::action
