#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "ulab/errors.hpp"

namespace ulab {

// zeta(2) to full double precision
inline constexpr double kZeta2 = 1.6449340668482264365;

// sum of 1/n^2 over n > N, exact small-N summation switching to the
// asymptotic expansion of the trigamma function at N+1 (error far below
// double rounding for N >= 64)
inline double inv_square_tail(std::int64_t N) {
	if (N < 0) N = 0;
	if (N < 64) {
		double head = 0.0;
		for (std::int64_t n = N; n >= 1; --n) head += 1.0 / (static_cast<double>(n) * n);
		return kZeta2 - head;
	}
	const double z = static_cast<double>(N) + 1.0;
	const double iz = 1.0 / z;
	const double iz2 = iz * iz;
	return iz * (1.0 + iz * (0.5 + iz * (1.0 / 6.0 + iz2 * (-1.0 / 30.0 + iz2 * (1.0 / 42.0 + iz2 * (-1.0 / 30.0))))));
}

// sum of 1/n^2 over 1 <= n <= N
inline double inv_square_partial(std::int64_t N) {
	if (N <= 0) return 0.0;
	if (N < 64) {
		double s = 0.0;
		for (std::int64_t n = N; n >= 1; --n) s += 1.0 / (static_cast<double>(n) * n);
		return s;
	}
	return kZeta2 - inv_square_tail(N);
}

// smallest N with inv_square_tail(N) <= bound
inline std::int64_t inv_square_tail_witness(double bound) {
	if (!(bound > 0)) throw Error("tail bound must be positive");
	std::int64_t lo = 0, hi = 1;
	while (inv_square_tail(hi) > bound) {
		if (hi > (std::int64_t{1} << 60)) throw Error("tail witness out of range");
		hi *= 2;
	}
	while (lo < hi) {
		const std::int64_t mid = lo + (hi - lo) / 2;
		if (inv_square_tail(mid) <= bound) hi = mid;
		else lo = mid + 1;
	}
	return lo;
}

// Sparse vector in a sequence space, for fields whose partial integrals
// touch only explicitly enumerated coordinates.
struct SparseVec {
	std::map<std::int64_t, std::complex<double>> entries;

	SparseVec& operator+=(const SparseVec& o) {
		for (const auto& [n, c] : o.entries) {
			auto it = entries.find(n);
			if (it == entries.end()) entries.emplace(n, c);
			else {
				it->second += c;
				if (it->second == std::complex<double>(0, 0)) entries.erase(it);
			}
		}
		return *this;
	}

	friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }

	friend SparseVec operator*(const SparseVec& a, double s) {
		SparseVec r;
		if (s != 0.0)
			for (const auto& [n, c] : a.entries) r.entries.emplace(n, c * s);
		return r;
	}
	friend SparseVec operator*(const SparseVec& a, std::complex<double> s) {
		SparseVec r;
		if (s != std::complex<double>(0, 0))
			for (const auto& [n, c] : a.entries) r.entries.emplace(n, c * s);
		return r;
	}
	friend SparseVec operator-(const SparseVec& a, const SparseVec& b) { return a + b * (-1.0); }

	double l2_norm() const {
		double s = 0.0;
		for (const auto& [n, c] : entries) s += std::norm(c);
		return std::sqrt(s);
	}
	double sup_norm() const {
		double m = 0.0;
		for (const auto& [n, c] : entries) m = std::max(m, std::abs(c));
		return m;
	}
};

// Element of l^2 over the naturals built from the family e_n / n: a few
// pairwise disjoint contiguous blocks, each meaning scale * sum e_n / n over
// [lo, hi], plus explicitly stored extra coordinates. Block contributions to
// the norm are evaluated analytically, so blocks like [1, 10^8] cost nothing.
struct SeqVec {
	struct Block {
		std::int64_t lo = 1, hi = 0;
		std::complex<double> scale{1.0, 0.0};
	};
	std::vector<Block> blocks;
	std::map<std::int64_t, std::complex<double>> extras;

	static SeqVec block(std::int64_t lo, std::int64_t hi, std::complex<double> scale = {1.0, 0.0}) {
		SeqVec v;
		if (lo <= hi && scale != std::complex<double>(0, 0)) v.blocks.push_back({lo, hi, scale});
		return v;
	}

	static SeqVec unit_over(std::int64_t n, std::complex<double> coeff) {
		SeqVec v;
		if (coeff != std::complex<double>(0, 0)) v.extras.emplace(n, coeff);
		return v;
	}

	SeqVec& operator+=(const SeqVec& o) {
		for (const Block& nb : o.blocks) {
			bool merged = false;
			for (Block& b : blocks) {
				if (b.lo == nb.lo && b.hi == nb.hi) {
					b.scale += nb.scale;
					merged = true;
					break;
				}
				const bool overlap = !(nb.hi < b.lo || b.hi < nb.lo);
				if (overlap) throw Error("overlapping mismatched blocks in sequence value");
			}
			if (!merged) blocks.push_back(nb);
		}
		for (const auto& [n, c] : o.extras) {
			auto it = extras.find(n);
			if (it == extras.end()) extras.emplace(n, c);
			else it->second += c;
		}
		return *this;
	}

	friend SeqVec operator+(SeqVec a, const SeqVec& b) { return a += b; }

	friend SeqVec operator*(const SeqVec& a, std::complex<double> s) {
		SeqVec r;
		if (s == std::complex<double>(0, 0)) return r;
		r.blocks = a.blocks;
		for (Block& b : r.blocks) b.scale *= s;
		for (const auto& [n, c] : a.extras) r.extras.emplace(n, c * s);
		return r;
	}
	friend SeqVec operator*(const SeqVec& a, double s) { return a * std::complex<double>(s, 0); }
	friend SeqVec operator-(const SeqVec& a, const SeqVec& b) { return a + b * (-1.0); }

	double l2_norm() const {
		double sq = 0.0;
		for (const Block& b : blocks)
			sq += std::norm(b.scale) * (inv_square_partial(b.hi) - inv_square_partial(b.lo - 1));
		for (const auto& [n, c] : extras) {
			std::complex<double> base(0, 0);
			for (const Block& b : blocks)
				if (b.lo <= n && n <= b.hi) base += b.scale / static_cast<double>(n);
			sq += std::norm(base + c) - std::norm(base);
		}
		return std::sqrt(std::max(0.0, sq));
	}

	// l^2 distance to the full limit vector (1/n)_n, assuming this value was
	// assembled from blocks of scale 1 (as the engine produces); extras may
	// sit anywhere.
	double distance_to_reciprocal_limit() const {
		double sq = inv_square_tail(0);  // start from ||limit||^2 and peel off coverage
		for (const Block& b : blocks) {
			if (std::abs(b.scale - std::complex<double>(1, 0)) > 1e-15)
				throw Error("distance helper expects unit-scale blocks");
			sq -= inv_square_partial(b.hi) - inv_square_partial(b.lo - 1);
		}
		for (const auto& [n, c] : extras) {
			bool covered = false;
			for (const Block& b : blocks)
				if (b.lo <= n && n <= b.hi) covered = true;
			const std::complex<double> resid =
			    covered ? -c : std::complex<double>(1.0 / static_cast<double>(n), 0) - c;
			const double plain = covered ? 0.0 : 1.0 / (static_cast<double>(n) * n);
			sq += std::norm(resid) - plain;
		}
		return std::sqrt(std::max(0.0, sq));
	}
};

}  // namespace ulab
