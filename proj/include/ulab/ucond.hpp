#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ulab/errors.hpp"
#include "ulab/rng.hpp"

namespace ulab::ucond {

using cplx = std::complex<double>;

// A finite index set: either an explicit sorted point list or a contiguous
// inclusive range [lo, hi]. Ranges let a witness like {1..10^8} exist without
// being materialized; fields that can integrate a range in closed form accept
// them directly.
class LocalSet {
public:
	static constexpr std::int64_t kEnumCap = 4'000'000;

	static LocalSet empty() { return LocalSet(); }

	static LocalSet from_points(std::vector<std::int64_t> pts) {
		LocalSet s;
		std::sort(pts.begin(), pts.end());
		pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
		s.pts_ = std::move(pts);
		return s;
	}

	static LocalSet single(std::int64_t p) { return from_points({p}); }

	static LocalSet range(std::int64_t lo, std::int64_t hi) {
		LocalSet s;
		if (lo <= hi) {
			s.is_range_ = true;
			s.lo_ = lo;
			s.hi_ = hi;
		}
		return s;
	}

	bool is_range() const { return is_range_; }
	std::int64_t lo() const { return is_range_ ? lo_ : (pts_.empty() ? 0 : pts_.front()); }
	std::int64_t hi() const { return is_range_ ? hi_ : (pts_.empty() ? -1 : pts_.back()); }

	std::int64_t size() const {
		return is_range_ ? (hi_ - lo_ + 1) : static_cast<std::int64_t>(pts_.size());
	}
	bool is_empty() const { return size() == 0; }

	bool contains(std::int64_t p) const {
		if (is_range_) return lo_ <= p && p <= hi_;
		return std::binary_search(pts_.begin(), pts_.end(), p);
	}

	bool disjoint_from(const LocalSet& o) const {
		if (is_empty() || o.is_empty()) return true;
		if (is_range_ && o.is_range_) return hi_ < o.lo_ || o.hi_ < lo_;
		const LocalSet& pointy = is_range_ ? o : *this;
		const LocalSet& other = is_range_ ? *this : o;
		for (std::int64_t p : pointy.pts_)
			if (other.contains(p)) return false;
		return true;
	}

	const std::vector<std::int64_t>& points() const {
		if (is_range_) throw Error("points() called on a range set; use for_each");
		return pts_;
	}

	template <class F>
	void for_each(F&& fn) const {
		if (is_range_) {
			if (size() > kEnumCap)
				throw EnumerationTooLarge("range set too large to enumerate: " + brief());
			for (std::int64_t p = lo_; p <= hi_; ++p) fn(p);
		} else {
			for (std::int64_t p : pts_) fn(p);
		}
	}

	std::vector<std::int64_t> materialize() const {
		std::vector<std::int64_t> out;
		out.reserve(static_cast<std::size_t>(std::min(size(), kEnumCap)));
		for_each([&](std::int64_t p) { out.push_back(p); });
		return out;
	}

	LocalSet union_with(const LocalSet& o) const {
		if (is_empty()) return o;
		if (o.is_empty()) return *this;
		if (is_range_ && o.is_range_ && o.lo_ <= hi_ + 1 && lo_ <= o.hi_ + 1)
			return range(std::min(lo_, o.lo_), std::max(hi_, o.hi_));
		auto a = materialize();
		auto b = o.materialize();
		a.insert(a.end(), b.begin(), b.end());
		return from_points(std::move(a));
	}

	LocalSet intersect_range(std::int64_t lo, std::int64_t hi) const {
		if (is_range_) return range(std::max(lo_, lo), std::min(hi_, hi));
		std::vector<std::int64_t> out;
		for (std::int64_t p : pts_)
			if (lo <= p && p <= hi) out.push_back(p);
		return from_points(std::move(out));
	}

	std::string brief() const {
		std::ostringstream os;
		if (is_range_) {
			os << "[" << lo_ << ".." << hi_ << "]";
		} else if (pts_.size() <= 8) {
			os << "{";
			for (std::size_t i = 0; i < pts_.size(); ++i) os << (i ? "," : "") << pts_[i];
			os << "}";
		} else {
			os << "{" << pts_.front() << ",...," << pts_.back() << "}(n=" << pts_.size() << ")";
		}
		return os.str();
	}

private:
	bool is_range_ = false;
	std::int64_t lo_ = 0, hi_ = -1;
	std::vector<std::int64_t> pts_;
};

enum class SpaceKind { Finite, Naturals, Integers };

// Countable point-mass space with a hereditary, union-closed local family.
// Every finite subset of the domain is local unless an extra predicate
// narrows the family. The canonical exhaustion is "first k points" in the
// enumeration order: 0..n-1 / 1,2,3,... / 0,1,-1,2,-2,...
struct LocalIntegrationSpace {
	SpaceKind kind = SpaceKind::Finite;
	std::int64_t finite_order = 0;
	std::function<double(std::int64_t)> mass;                 // nullptr means 1 per point
	std::function<bool(const LocalSet&)> extra_local_predicate;  // optional narrowing

	double mass_at(std::int64_t s) const { return mass ? mass(s) : 1.0; }

	bool in_domain(std::int64_t p) const {
		switch (kind) {
			case SpaceKind::Finite: return 0 <= p && p < finite_order;
			case SpaceKind::Naturals: return p >= 1;
			case SpaceKind::Integers: return true;
		}
		return false;
	}

	bool local(const LocalSet& L) const {
		if (!L.is_empty()) {
			if (!in_domain(L.lo()) || !in_domain(L.hi())) return false;
			if (kind == SpaceKind::Naturals && L.lo() < 1) return false;
		}
		if (extra_local_predicate && !extra_local_predicate(L)) return false;
		return true;
	}

	// First k points of the enumeration order, as a compact set.
	LocalSet first_points(std::int64_t k) const {
		if (k <= 0) return LocalSet::empty();
		switch (kind) {
			case SpaceKind::Finite: return LocalSet::range(0, std::min(k, finite_order) - 1);
			case SpaceKind::Naturals: return LocalSet::range(1, k);
			case SpaceKind::Integers: {
				const std::int64_t m = k / 2;
				return LocalSet::range(-m, k - m - 1);  // 0,1,-1,2,-2,... first k
			}
		}
		return LocalSet::empty();
	}

	static LocalIntegrationSpace finite(std::int64_t n, double point_mass = 1.0) {
		LocalIntegrationSpace s;
		s.kind = SpaceKind::Finite;
		s.finite_order = n;
		if (point_mass != 1.0) s.mass = [point_mass](std::int64_t) { return point_mass; };
		return s;
	}

	static LocalIntegrationSpace naturals() {
		LocalIntegrationSpace s;
		s.kind = SpaceKind::Naturals;
		return s;
	}

	static LocalIntegrationSpace integers() {
		LocalIntegrationSpace s;
		s.kind = SpaceKind::Integers;
		return s;
	}
};

enum class OracleKind { FiniteSupport, L1OfNorms, L2Orthogonality };

// Analytic tail bound: witness_for(eps) returns L0 such that every local D
// disjoint from L0 has ||integral over D|| <= eps, justified by the stated
// kind (exact support, summable norms, or orthogonality).
struct TailOracle {
	OracleKind kind = OracleKind::FiniteSupport;
	std::function<LocalSet(double)> witness_for;
};

inline const char* oracle_kind_name(OracleKind k) {
	switch (k) {
		case OracleKind::FiniteSupport: return "finite-support";
		case OracleKind::L1OfNorms: return "l1-of-norms";
		case OracleKind::L2Orthogonality: return "l2-orthogonality";
	}
	return "?";
}

// Shape guard hook; specialized per value type where shapes exist.
template <class V>
inline void check_same_shape(const V&, const V&) {}

template <class V>
struct VectorField {
	LocalIntegrationSpace space;
	std::function<V(std::int64_t)> value;
	V zero{};
	std::function<double(const V&)> norm;
	std::optional<TailOracle> tail;
	// Optional closed form for the integral over a contiguous range [lo, hi]
	// (point masses included). Lets huge range witnesses evaluate exactly.
	std::function<V(std::int64_t, std::int64_t)> range_integral;
	// Optional scalar reduction used to build sign-selected probe sets.
	std::function<double(std::int64_t)> sign_hint;
};

enum class CertStatus { Proof, Evidence, Exact };

inline const char* cert_status_name(CertStatus s) {
	switch (s) {
		case CertStatus::Proof: return "proof";
		case CertStatus::Evidence: return "evidence";
		case CertStatus::Exact: return "exact";
	}
	return "?";
}

struct TraceEntry {
	LocalSet set;
	double distance = 0.0;  // ||integral over set||, set disjoint from the witness
};

template <class V>
struct Certificate {
	V value{};
	LocalSet witness;
	double epsilon = 0.0;
	CertStatus status = CertStatus::Evidence;
	std::vector<TraceEntry> trace;
};

template <class V>
struct CauchyViolation {
	LocalSet set;        // local, disjoint from the attempted witness
	V partial{};         // integral over the set
	double norm = 0.0;   // its norm, >= eps
	double eps = 0.0;
};

template <class V>
using UResult = std::variant<Certificate<V>, CauchyViolation<V>>;

namespace detail {

inline void require_local(const LocalIntegrationSpace& space, const LocalSet& L) {
	if (!space.local(L)) throw NotLocal("set " + L.brief() + " is not local in this space");
}

}  // namespace detail

template <class V>
V integrate_over(const VectorField<V>& f, const LocalSet& L) {
	detail::require_local(f.space, L);
	if (L.is_empty()) return f.zero;
	if (L.is_range() && f.range_integral) return f.range_integral(L.lo(), L.hi());
	V acc = f.zero;
	L.for_each([&](std::int64_t s) {
		V term = f.value(s) * f.space.mass_at(s);
		check_same_shape(acc, term);
		acc += term;
	});
	return acc;
}

namespace detail {

// Probe families disjoint from the witness: dense slabs / shells beyond the
// frontier with spans x2..x32, parity-filtered variants, sign-selected
// variants when a hint is available, singletons, and seeded random subsets.
// Structured families are what actually locate the known counterexamples.
template <class V>
std::vector<LocalSet> make_probes(const VectorField<V>& f, const LocalSet& witness,
                                  int probe_budget, std::uint64_t seed) {
	const LocalIntegrationSpace& sp = f.space;
	std::vector<LocalSet> probes;
	Rng rng(seed ? seed : 0x9e3779b9ULL);

	auto add = [&](LocalSet s) {
		if (!s.is_empty() && s.disjoint_from(witness) && sp.local(s)) probes.push_back(std::move(s));
	};

	auto add_patterned = [&](std::int64_t lo, std::int64_t hi) {
		if (lo > hi) return;
		const std::int64_t span = hi - lo + 1;
		if (span <= (1 << 20)) {
			add(LocalSet::range(lo, hi));
			std::vector<std::int64_t> evens, odds, pos, neg;
			for (std::int64_t p = lo; p <= hi; ++p) {
				((p % 2 == 0) ? evens : odds).push_back(p);
				if (f.sign_hint) {
					const double h = f.sign_hint(p);
					if (h > 0) pos.push_back(p);
					else if (h < 0) neg.push_back(p);
				}
			}
			add(LocalSet::from_points(std::move(evens)));
			add(LocalSet::from_points(std::move(odds)));
			if (f.sign_hint) {
				add(LocalSet::from_points(std::move(pos)));
				add(LocalSet::from_points(std::move(neg)));
			}
		} else {
			// too wide to enumerate; the full slab still probes exactly when a
			// closed form exists, and sampled stand-ins cover the rest
			if (f.range_integral) add(LocalSet::range(lo, hi));
			std::set<std::int64_t> evens, any;
			for (int i = 0; i < 512; ++i) {
				const std::int64_t p = rng.uniform_int(lo, hi);
				any.insert(p);
				std::int64_t q = (p % 2 == 0) ? p : p + 1;
				if (q > hi) q = p - 1;
				if (lo <= q && q <= hi) evens.insert(q);
			}
			add(LocalSet::from_points(std::vector<std::int64_t>(any.begin(), any.end())));
			add(LocalSet::from_points(std::vector<std::int64_t>(evens.begin(), evens.end())));
		}
	};

	if (sp.kind == SpaceKind::Finite) {
		std::vector<std::int64_t> comp;
		for (std::int64_t p = 0; p < sp.finite_order; ++p)
			if (!witness.contains(p)) comp.push_back(p);
		if (!comp.empty()) {
			add(LocalSet::from_points(comp));
			for (std::size_t i = 0; i < comp.size() && i < 3; ++i) add(LocalSet::single(comp[i]));
			for (int trial = 0; trial < probe_budget; ++trial) {
				std::vector<std::int64_t> sub;
				for (std::int64_t p : comp)
					if (rng.uniform() < 0.5) sub.push_back(p);
				add(LocalSet::from_points(std::move(sub)));
			}
		}
		return probes;
	}

	const bool integers = sp.kind == SpaceKind::Integers;
	std::int64_t frontier = 1;
	if (!witness.is_empty())
		frontier = std::max<std::int64_t>(
		    {frontier, std::abs(static_cast<std::int64_t>(witness.lo())), std::abs(static_cast<std::int64_t>(witness.hi()))});

	// huge oracle witnesses (tiny eps) would overflow frontier * 32; saturate
	const auto beyond = [frontier](std::int64_t mult) {
		constexpr std::int64_t cap = std::numeric_limits<std::int64_t>::max() / 64;
		return frontier > cap ? cap * 64 : frontier * mult;
	};

	for (std::int64_t p = frontier + 1; p <= frontier + 3; ++p) {
		add(LocalSet::single(p));
		if (integers) add(LocalSet::single(-p));
	}

	for (std::int64_t mult : {2, 4, 8, 16, 32}) {
		const std::int64_t lo = frontier + 1;
		const std::int64_t hi = beyond(mult);
		add_patterned(lo, hi);
		if (integers) {
			add_patterned(-hi, -lo);
			// symmetric shell, materialized when narrow enough
			if (hi - lo + 1 <= (1 << 19)) {
				std::vector<std::int64_t> shell;
				for (std::int64_t p = lo; p <= hi; ++p) {
					shell.push_back(p);
					shell.push_back(-p);
				}
				add(LocalSet::from_points(std::move(shell)));
			}
		}
	}

	for (int trial = 0; trial < probe_budget; ++trial) {
		std::set<std::int64_t> pts;
		const std::int64_t hi = beyond(32);
		const int count = 64;
		for (int i = 0; i < count; ++i) {
			std::int64_t p = rng.uniform_int(frontier + 1, std::max(frontier + 1, hi));
			if (integers && rng.uniform() < 0.5) p = -p;
			pts.insert(p);
		}
		add(LocalSet::from_points(std::vector<std::int64_t>(pts.begin(), pts.end())));
	}

	return probes;
}

}  // namespace detail

// Certify unconditional integrability at the requested eps, or return a
// witnessed violation. With a tail oracle the certificate is a proof (exact
// when the support itself is finite); without one the exhaustion is walked
// until partial integrals stabilize and the result is flagged as evidence.
template <class V>
UResult<V> u_integrate(const VectorField<V>& f, double eps, int probe_budget = 64,
                       std::uint64_t seed = 0x51ab1db, std::int64_t enum_cutoff = 1'048'576) {
	std::vector<TraceEntry> trace;

	auto probe_phase = [&](const LocalSet& witness,
	                       double bar) -> std::optional<CauchyViolation<V>> {
		for (LocalSet& D : detail::make_probes(f, witness, probe_budget, seed)) {
			V part = integrate_over(f, D);
			const double nd = f.norm(part);
			trace.push_back({D, nd});
			if (nd >= bar) return CauchyViolation<V>{std::move(D), std::move(part), nd, eps};
		}
		return std::nullopt;
	};

	if (f.tail) {
		const LocalSet witness = f.tail->witness_for(eps);
		detail::require_local(f.space, witness);
		V value = integrate_over(f, witness);
		const bool exact = f.tail->kind == OracleKind::FiniteSupport;
		const double bar = exact ? 1e-14 * std::max(1.0, f.norm(value)) : eps;
		if (auto v = probe_phase(witness, bar)) return *v;
		Certificate<V> cert;
		cert.value = std::move(value);
		cert.witness = witness;
		cert.epsilon = exact ? 0.0 : eps;
		cert.status = exact ? CertStatus::Exact : CertStatus::Proof;
		cert.trace = std::move(trace);
		return cert;
	}

	// Evidence mode: walk the canonical exhaustion with doubling step.
	V value = integrate_over(f, f.space.first_points(1));
	std::int64_t k = 1;
	int calm_streak = 0;
	int spike_streak = 0;
	LocalSet witness = f.space.first_points(1);
	bool stabilized = false;

	while (k < enum_cutoff) {
		const std::int64_t k2 = std::min(2 * k, enum_cutoff);
		const LocalSet Lk = f.space.first_points(k);
		const LocalSet Lk2 = f.space.first_points(k2);

		// difference block of the exhaustion, integrated directly
		LocalSet diff;
		if (Lk.is_range() && Lk2.is_range() && Lk2.lo() <= Lk.lo() && Lk.hi() <= Lk2.hi()) {
			std::vector<std::int64_t> pts;
			for (std::int64_t p = Lk2.lo(); p < Lk.lo(); ++p) pts.push_back(p);
			for (std::int64_t p = Lk.hi() + 1; p <= Lk2.hi(); ++p) pts.push_back(p);
			diff = LocalSet::from_points(std::move(pts));
		} else {
			throw Error("exhaustion steps are expected to be nested ranges");
		}

		V block = integrate_over(f, diff);
		const double d = f.norm(block);
		trace.push_back({diff, d});
		value += block;
		witness = Lk2;
		k = k2;

		// persistent single-point mass beyond the frontier = non-Cauchy as witnessed
		const std::int64_t beyond =
		    f.space.kind == SpaceKind::Finite ? -1 : (witness.hi() + 1);
		double single_mass = 0.0;
		if (beyond >= 0 && f.space.in_domain(beyond))
			single_mass = f.norm(f.value(beyond) * f.space.mass_at(beyond));

		if (d < eps / 4) {
			spike_streak = 0;
			if (++calm_streak >= 2) {
				stabilized = true;
				break;
			}
		} else {
			calm_streak = 0;
			// a genuine spike: one point past the frontier carries eps-level
			// mass that is also a dominant share of the latest block, so the
			// family is not thinning out, it keeps producing heavy singletons
			if (single_mass >= eps && single_mass >= 0.5 * d && ++spike_streak >= 3) {
				LocalSet bad = LocalSet::single(beyond);
				V part = integrate_over(f, bad);
				const double np = f.norm(part);
				return CauchyViolation<V>{std::move(bad), std::move(part), np, eps};
			}
		}

		if (f.space.kind == SpaceKind::Finite && witness.size() >= f.space.finite_order) {
			stabilized = true;  // whole space reached: net is constant from here
			break;
		}
	}

	if (!stabilized) {
		// ran out of budget while still moving: report the last block if it
		// already violates the requested eps, otherwise keep it as evidence
		if (!trace.empty() && trace.back().distance >= eps) {
			const LocalSet bad = trace.back().set;
			V part = integrate_over(f, bad);
			const double np = f.norm(part);
			return CauchyViolation<V>{bad, std::move(part), np, eps};
		}
	}

	if (auto v = probe_phase(witness, eps)) return *v;

	Certificate<V> cert;
	cert.value = std::move(value);
	cert.witness = witness;
	cert.epsilon = eps;
	cert.status = CertStatus::Evidence;
	cert.trace = std::move(trace);
	return cert;
}

// sup over the sampled local sets of ||integral over L||: a certified lower
// bound for the pseudo-integrability constant, exact when the sample is the
// full (finite) family.
template <class V>
double pseudo_bound(const VectorField<V>& f, const std::vector<LocalSet>& sample) {
	double best = 0.0;
	for (const LocalSet& L : sample) {
		detail::require_local(f.space, L);
		best = std::max(best, f.norm(integrate_over(f, L)));
	}
	return best;
}

// sup over the split-closure of the sample of the absolute sum over L.
// The closure adds the four sign-split pieces of each sampled set; the
// returned variation is asserted against 4x the pseudo bound on the closure
// (2 per real part), which is the constant the splitting argument yields for
// complex scalars.
inline double scalar_variation_bound(const VectorField<cplx>& f,
                                     const std::vector<LocalSet>& sample) {
	std::vector<LocalSet> closure;
	for (const LocalSet& L : sample) {
		detail::require_local(f.space, L);
		closure.push_back(L);
		std::vector<std::int64_t> re_pos, re_neg, im_pos, im_neg;
		L.for_each([&](std::int64_t s) {
			const cplx v = f.value(s);
			if (v.real() > 0) re_pos.push_back(s);
			if (v.real() < 0) re_neg.push_back(s);
			if (v.imag() > 0) im_pos.push_back(s);
			if (v.imag() < 0) im_neg.push_back(s);
		});
		closure.push_back(LocalSet::from_points(std::move(re_pos)));
		closure.push_back(LocalSet::from_points(std::move(re_neg)));
		closure.push_back(LocalSet::from_points(std::move(im_pos)));
		closure.push_back(LocalSet::from_points(std::move(im_neg)));
	}

	double variation = 0.0;
	for (const LocalSet& L : closure) {
		double s = 0.0;
		L.for_each([&](std::int64_t p) { s += std::abs(f.value(p)) * f.space.mass_at(p); });
		variation = std::max(variation, s);
	}

	const double m = pseudo_bound(f, closure);
	if (variation > 4.0 * m + 1e-10 * std::max(1.0, m))
		throw Error("variation exceeded 4x the pseudo bound on the split closure");
	return variation;
}

// Pointwise multiplication by a bounded scalar function. A tail oracle
// survives with the witness taken at eps / sup|phi|.
template <class V>
VectorField<V> multiply_linf(const VectorField<V>& f, std::function<cplx(std::int64_t)> phi,
                             double sup_phi) {
	if (!(sup_phi >= 0.0) || !std::isfinite(sup_phi))
		throw UnboundedMultiplier("multiplier needs a finite declared sup bound");
	VectorField<V> g;
	g.space = f.space;
	g.zero = f.zero;
	g.norm = f.norm;
	auto base = f.value;
	g.value = [base, phi](std::int64_t s) { return base(s) * phi(s); };
	if (f.tail) {
		TailOracle t;
		t.kind = f.tail->kind;
		auto inner = f.tail->witness_for;
		const double scale = std::max(sup_phi, 1e-300);
		t.witness_for = [inner, scale](double eps) { return inner(eps / scale); };
		g.tail = t;
	}
	return g;
}

// Uniform tail set: needs an oracle whose bound controls the sum of norms
// (finite support or l1-of-norms). An orthogonality oracle certifies
// u-integrability but not this uniform bound, so it is refused; that
// asymmetry is the point of the basis-over-n example.
template <class V>
LocalSet uniform_tail_set(const VectorField<V>& f, double eps) {
	if (!f.tail) throw NoOracle("no tail oracle attached");
	if (f.tail->kind == OracleKind::L2Orthogonality)
		throw NoOracle("orthogonality oracle does not provide the uniform sum-of-norms bound");
	return f.tail->witness_for(eps);
}

// Restriction to the uniform tail set: the discarded remainder contributes
// at most eps against every local set and every sup-1 multiplier.
template <class V>
std::pair<VectorField<V>, double> truncate_to_local(const VectorField<V>& f, double eps) {
	const LocalSet L0 = uniform_tail_set(f, eps);
	VectorField<V> f0;
	f0.space = f.space;
	f0.zero = f.zero;
	f0.norm = f.norm;
	auto base = f.value;
	f0.value = [base, L0, zero = f.zero](std::int64_t s) { return L0.contains(s) ? base(s) : zero; };
	TailOracle t;
	t.kind = OracleKind::FiniteSupport;
	t.witness_for = [L0](double) { return L0; };
	f0.tail = t;
	return {std::move(f0), eps};
}

}  // namespace ulab::ucond
