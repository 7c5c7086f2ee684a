#pragma once

#include <cmath>
#include <complex>
#include <cstdint>

namespace ulab {

// splitmix64: cheap, well mixed, used to fan a global seed out into
// independent per-check streams so report content is reproducible.
inline std::uint64_t splitmix64(std::uint64_t& state) {
	state += 0x9e3779b97f4a7c15ULL;
	std::uint64_t z = state;
	z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
	z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
	return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream) {
	std::uint64_t s = root ^ (0x9e3779b97f4a7c15ULL * (stream + 1));
	std::uint64_t a = splitmix64(s);
	std::uint64_t b = splitmix64(s);
	return a ^ (b << 1);
}

// Deterministic generator with hand-rolled distributions. The standard
// distribution objects are not pinned across library implementations,
// so uniforms and gaussians are produced here from raw 64-bit draws.
class Rng {
public:
	explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x6a09e667f3bcc909ULL) {}

	std::uint64_t next_u64() { return splitmix64(state_); }

	double uniform() {  // [0, 1)
		return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
	}

	double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

	std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
		const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
		return lo + static_cast<std::int64_t>(next_u64() % span);
	}

	double gaussian() {
		if (have_spare_) {
			have_spare_ = false;
			return spare_;
		}
		double u1 = uniform();
		while (u1 <= 0x1.0p-60) u1 = uniform();
		const double u2 = uniform();
		const double r = std::sqrt(-2.0 * std::log(u1));
		const double a = 6.283185307179586476925286766559 * u2;
		spare_ = r * std::sin(a);
		have_spare_ = true;
		return r * std::cos(a);
	}

	std::complex<double> gaussian_complex() {
		return {gaussian(), gaussian()};
	}

private:
	std::uint64_t state_;
	bool have_spare_ = false;
	double spare_ = 0.0;
};

}  // namespace ulab
