#include "ulab/finite_abelian.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "ulab/errors.hpp"

namespace ulab::abelian {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

std::int64_t FiniteAbelianGroup::order() const {
	std::int64_t n = 1;
	for (std::int64_t f : factors) n *= f;
	return n;
}

std::vector<std::int64_t> FiniteAbelianGroup::coords(std::int64_t index) const {
	if (index < 0 || index >= order()) throw FactorMismatch("element index out of range");
	std::vector<std::int64_t> c(factors.size());
	for (std::size_t i = 0; i < factors.size(); ++i) {
		c[i] = index % factors[i];
		index /= factors[i];
	}
	return c;
}

std::int64_t FiniteAbelianGroup::index_of(const std::vector<std::int64_t>& coords) const {
	if (coords.size() != factors.size())
		throw FactorMismatch("coordinate tuple does not match the factor list");
	std::int64_t idx = 0;
	for (std::size_t i = factors.size(); i-- > 0;) {
		const std::int64_t c = ((coords[i] % factors[i]) + factors[i]) % factors[i];
		idx = idx * factors[i] + c;
	}
	return idx;
}

std::int64_t FiniteAbelianGroup::add(std::int64_t a, std::int64_t b) const {
	const auto ca = coords(a);
	const auto cb = coords(b);
	std::vector<std::int64_t> c(factors.size());
	for (std::size_t i = 0; i < factors.size(); ++i) c[i] = (ca[i] + cb[i]) % factors[i];
	return index_of(c);
}

std::int64_t FiniteAbelianGroup::neg(std::int64_t a) const {
	const auto ca = coords(a);
	std::vector<std::int64_t> c(factors.size());
	for (std::size_t i = 0; i < factors.size(); ++i) c[i] = (factors[i] - ca[i]) % factors[i];
	return index_of(c);
}

std::int64_t FiniteAbelianGroup::sub(std::int64_t a, std::int64_t b) const {
	return add(a, neg(b));
}

FiniteAbelianGroup FiniteAbelianGroup::parse(const std::string& csv) {
	FiniteAbelianGroup g;
	std::stringstream ss(csv);
	std::string item;
	while (std::getline(ss, item, ',')) {
		std::size_t pos = 0;
		long long v = 0;
		try {
			v = std::stoll(item, &pos);
		} catch (const std::exception&) {
			throw ValidationError("bad group factor: '" + item + "'");
		}
		while (pos < item.size() && std::isspace(static_cast<unsigned char>(item[pos]))) ++pos;
		if (pos != item.size() || v < 1) throw ValidationError("bad group factor: '" + item + "'");
		g.factors.push_back(v);
	}
	if (g.factors.empty()) throw ValidationError("empty group factor list");
	return g;
}

std::string FiniteAbelianGroup::to_string() const {
	std::ostringstream os;
	for (std::size_t i = 0; i < factors.size(); ++i) os << (i ? "," : "") << factors[i];
	return os.str();
}

cplx pairing(const FiniteAbelianGroup& g, std::int64_t t, std::int64_t x) {
	const auto ct = g.coords(t);  // throws FactorMismatch when out of range
	const auto cx = g.coords(x);
	double turns = 0.0;  // fraction of a full turn, assembled from reduced residues
	for (std::size_t i = 0; i < g.factors.size(); ++i) {
		const std::int64_t r = (ct[i] * cx[i]) % g.factors[i];
		turns += static_cast<double>(r) / static_cast<double>(g.factors[i]);
	}
	const double angle = kTwoPi * turns;
	return {std::cos(angle), std::sin(angle)};
}

FiniteAbelianGroup dual_group(const FiniteAbelianGroup& g) {
	return g;
}

const Mat& OperatorField::at(std::int64_t t) const {
	return values.at(static_cast<std::size_t>(t));
}

Mat& OperatorField::at(std::int64_t t) {
	return values.at(static_cast<std::size_t>(t));
}

OperatorField OperatorField::zeros(const FiniteAbelianGroup& g, int dim) {
	OperatorField f;
	f.group = g;
	f.dim = dim;
	f.values.assign(static_cast<std::size_t>(g.order()), Mat::Zero(dim, dim));
	return f;
}

OperatorField fourier(const OperatorField& f) {
	const std::int64_t n = f.group.order();
	OperatorField out = OperatorField::zeros(f.group, f.dim);
	for (std::int64_t x = 0; x < n; ++x) {
		Mat acc = Mat::Zero(f.dim, f.dim);
		for (std::int64_t t = 0; t < n; ++t) acc += pairing(f.group, t, x) * f.at(t);
		out.at(x) = acc;
	}
	return out;
}

OperatorField inverse_fourier(const OperatorField& g) {
	const std::int64_t n = g.group.order();
	const double mass = 1.0 / static_cast<double>(n);
	OperatorField out = OperatorField::zeros(g.group, g.dim);
	for (std::int64_t t = 0; t < n; ++t) {
		Mat acc = Mat::Zero(g.dim, g.dim);
		for (std::int64_t x = 0; x < n; ++x)
			acc += std::conj(pairing(g.group, t, x)) * g.at(x);
		out.at(t) = acc * mass;
	}
	return out;
}

PlancherelResult plancherel_check(const OperatorField& f) {
	const auto haar = haar_for(f.group);
	const OperatorField fh = fourier(f);
	PlancherelResult r;
	for (std::int64_t t = 0; t < f.group.order(); ++t)
		r.lhs += frobenius(f.at(t)) * frobenius(f.at(t)) * haar.mass_group;
	for (std::int64_t x = 0; x < f.group.order(); ++x)
		r.rhs += frobenius(fh.at(x)) * frobenius(fh.at(x)) * haar.mass_dual;
	r.abs_err = std::abs(r.lhs - r.rhs);
	return r;
}

}  // namespace ulab::abelian
