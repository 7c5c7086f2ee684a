#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ulab/linalg.hpp"

namespace ulab::abelian {

// Finite abelian group presented as a product of cyclic factors, exactly as
// the user wrote it ("4,2" stays Z4 x Z2). Elements are flat indices in
// mixed-radix order, first factor fastest. Characters share the same index
// space through the standard self-duality of the factors.
struct FiniteAbelianGroup {
	std::vector<std::int64_t> factors;

	std::int64_t order() const;
	std::vector<std::int64_t> coords(std::int64_t index) const;
	std::int64_t index_of(const std::vector<std::int64_t>& coords) const;

	std::int64_t add(std::int64_t a, std::int64_t b) const;
	std::int64_t neg(std::int64_t a) const;
	std::int64_t sub(std::int64_t a, std::int64_t b) const;
	static constexpr std::int64_t identity() { return 0; }

	bool operator==(const FiniteAbelianGroup& o) const { return factors == o.factors; }

	static FiniteAbelianGroup parse(const std::string& csv);
	std::string to_string() const;
};

// duality pairing (t, x) = prod_i exp(2 pi i t_i x_i / n_i), unit modulus
cplx pairing(const FiniteAbelianGroup& g, std::int64_t t, std::int64_t x);

// the dual of a finite abelian group, presented on the same factor list
FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g);

struct HaarPair {
	double mass_group = 1.0;  // per point of G
	double mass_dual = 1.0;   // per character
};

inline HaarPair haar_for(const FiniteAbelianGroup& g) {
	return {1.0, 1.0 / static_cast<double>(g.order())};
}

struct OperatorField {
	FiniteAbelianGroup group;
	int dim = 1;
	std::vector<Mat> values;  // one dim x dim matrix per group element

	const Mat& at(std::int64_t t) const;
	Mat& at(std::int64_t t);
	static OperatorField zeros(const FiniteAbelianGroup& g, int dim);
};

// forward transform on the group side: fhat(x) = sum_t (t,x) f(t), mass 1
OperatorField fourier(const OperatorField& f);

// inverse on the dual side: (t) -> sum_x conj((t,x)) g(x) / |G|
OperatorField inverse_fourier(const OperatorField& g);

struct PlancherelResult {
	double lhs = 0.0;
	double rhs = 0.0;
	double abs_err = 0.0;
};

PlancherelResult plancherel_check(const OperatorField& f);

}  // namespace ulab::abelian
