#include "ulab/fell_bundle.hpp"

#include <cmath>
#include <sstream>
#include <utility>

#include "ulab/errors.hpp"
#include "ulab/rng.hpp"
#include "ulab/ucond_matrix.hpp"

namespace ulab::fell {

namespace {

cplx frob_inner(const Mat& a, const Mat& b) {
	return (a.adjoint() * b).trace();
}

std::vector<Mat> orthonormalize(const std::vector<Mat>& span, int dim) {
	std::vector<Mat> basis;
	for (const Mat& raw : span) {
		if (raw.rows() != dim || raw.cols() != dim)
			throw ShapeMismatch("fiber basis matrix has the wrong ambient dimension");
		Mat v = raw;
		for (int pass = 0; pass < 2; ++pass)
			for (const Mat& b : basis) v -= frob_inner(b, v) * b;
		const double n = frobenius(v);
		if (n > 1e-12) basis.push_back(v / n);
	}
	return basis;
}

void require_same_bundle(const BundlePtr& a, const BundlePtr& b) {
	if (a.get() != b.get()) throw BundleMismatch("sections belong to different bundles");
}

}  // namespace

Mat FellBundle::project_onto_fiber(std::int64_t t, const Mat& m) const {
	Mat acc = Mat::Zero(ambient_dim, ambient_dim);
	for (const Mat& b : basis_at(t)) acc += frob_inner(b, m) * b;
	return acc;
}

double FellBundle::fiber_residual(std::int64_t t, const Mat& m) const {
	return frobenius(m - project_onto_fiber(t, m));
}

BundleValidation validate_bundle(const FellBundle& b, double tol) {
	const std::int64_t n = b.group.order();
	BundleValidation rep;
	for (std::int64_t s = 0; s < n; ++s) {
		for (std::size_t i = 0; i < b.basis_at(s).size(); ++i) {
			const Mat& u = b.basis_at(s)[i];
			const double inv_res = b.fiber_residual(b.group.neg(s), u.adjoint());
			rep.max_involution_residual = std::max(rep.max_involution_residual, inv_res);
			if (inv_res > tol) {
				std::ostringstream os;
				os << "involution leaves the grading: fiber " << s << ", basis element " << i
				   << ", residual " << inv_res;
				throw GradingViolation(os.str());
			}
			for (std::int64_t t = 0; t < n; ++t) {
				for (std::size_t j = 0; j < b.basis_at(t).size(); ++j) {
					const Mat& v = b.basis_at(t)[j];
					const double res = b.fiber_residual(b.group.add(s, t), u * v);
					rep.max_product_residual = std::max(rep.max_product_residual, res);
					if (s == b.group.identity() && t == b.group.identity())
						rep.max_unit_fiber_residual = std::max(rep.max_unit_fiber_residual, res);
					if (res > tol) {
						std::ostringstream os;
						os << "product leaves the grading: fibers (" << s << "," << t
						   << "), basis elements (" << i << "," << j << "), residual " << res;
						throw GradingViolation(os.str());
					}
				}
			}
		}
	}
	return rep;
}

BundlePtr make_bundle(abelian::FiniteAbelianGroup group, int ambient_dim,
                      std::vector<std::vector<Mat>> fiber_spans) {
	auto b = std::make_shared<FellBundle>();
	b->group = std::move(group);
	b->ambient_dim = ambient_dim;
	if (static_cast<std::int64_t>(fiber_spans.size()) != b->group.order())
		throw ValidationError("one fiber span required per group element");
	b->fiber_basis.reserve(fiber_spans.size());
	for (auto& span : fiber_spans) b->fiber_basis.push_back(orthonormalize(span, ambient_dim));
	validate_bundle(*b);
	return b;
}

Section make_section(BundlePtr bundle, std::vector<Mat> values) {
	if (static_cast<std::int64_t>(values.size()) != bundle->group.order())
		throw ValidationError("one value required per group element");
	for (std::int64_t t = 0; t < bundle->group.order(); ++t) {
		const double res = bundle->fiber_residual(t, values[static_cast<std::size_t>(t)]);
		if (res > FellBundle::kFiberTol) {
			std::ostringstream os;
			os << "section value at " << t << " is outside its fiber, residual " << res;
			throw FiberViolation(os.str());
		}
	}
	Section s;
	s.bundle = std::move(bundle);
	s.values = std::move(values);
	return s;
}

Section zero_section(BundlePtr bundle) {
	const int d = bundle->ambient_dim;
	std::vector<Mat> vals(static_cast<std::size_t>(bundle->group.order()), Mat::Zero(d, d));
	Section s;
	s.bundle = std::move(bundle);
	s.values = std::move(vals);
	return s;
}

Section delta_section(BundlePtr bundle, std::int64_t t, const Mat& coefficient) {
	Section s = zero_section(std::move(bundle));
	const double res = s.bundle->fiber_residual(t, coefficient);
	if (res > FellBundle::kFiberTol)
		throw FiberViolation("delta coefficient is outside fiber " + std::to_string(t));
	s.at(t) = coefficient;
	return s;
}

Section random_section(BundlePtr bundle, std::uint64_t seed) {
	Rng rng(seed);
	Section s = zero_section(std::move(bundle));
	for (std::int64_t t = 0; t < s.bundle->group.order(); ++t) {
		Mat acc = Mat::Zero(s.bundle->ambient_dim, s.bundle->ambient_dim);
		for (const Mat& b : s.bundle->basis_at(t)) acc += rng.gaussian_complex() * b;
		s.at(t) = acc;
	}
	return s;
}

Section convolve(const Section& f, const Section& g) {
	require_same_bundle(f.bundle, g.bundle);
	const auto& G = f.bundle->group;
	Section out = zero_section(f.bundle);
	for (std::int64_t t = 0; t < G.order(); ++t) {
		Mat acc = Mat::Zero(f.bundle->ambient_dim, f.bundle->ambient_dim);
		for (std::int64_t s = 0; s < G.order(); ++s) acc += f.at(s) * g.at(G.sub(t, s));
		out.at(t) = acc;
	}
	return make_section(f.bundle, std::move(out.values));
}

Section involve(const Section& f) {
	const auto& G = f.bundle->group;
	Section out = zero_section(f.bundle);
	for (std::int64_t t = 0; t < G.order(); ++t) out.at(t) = f.at(G.neg(t)).adjoint();
	return out;
}

Section add(const Section& f, const Section& g) {
	require_same_bundle(f.bundle, g.bundle);
	Section out = f;
	for (std::int64_t t = 0; t < f.bundle->group.order(); ++t) out.at(t) += g.at(t);
	return out;
}

Section scale(const Section& f, cplx c) {
	Section out = f;
	for (auto& v : out.values) v *= c;
	return out;
}

Mat regular_representation(const Section& f) {
	const auto& G = f.bundle->group;
	const std::int64_t n = G.order();
	const int d = f.bundle->ambient_dim;
	Mat L = Mat::Zero(n * d, n * d);
	for (std::int64_t t = 0; t < n; ++t)
		for (std::int64_t s = 0; s < n; ++s) L.block(t * d, s * d, d, d) = f.at(G.sub(t, s));
	return L;
}

double cstar_norm(const Section& f) {
	return operator_norm(regular_representation(f));
}

BundleMultiplier make_multiplier(BundlePtr bundle, std::int64_t anchor, const Mat& coefficient) {
	if (bundle->fiber_residual(anchor, coefficient) > FellBundle::kFiberTol)
		throw FiberViolation("multiplier coefficient is outside fiber " + std::to_string(anchor));
	return {std::move(bundle), anchor, coefficient};
}

Section multiplier_apply(const BundleMultiplier& m, const Section& g, Side side) {
	require_same_bundle(m.bundle, g.bundle);
	const auto& G = m.bundle->group;
	Section out = zero_section(m.bundle);
	for (std::int64_t s = 0; s < G.order(); ++s) {
		const Mat& shifted = g.at(G.sub(s, m.anchor));
		out.at(s) = side == Side::Left ? Mat(m.coefficient * shifted) : Mat(shifted * m.coefficient);
	}
	return make_section(m.bundle, std::move(out.values));
}

Section dual_action(std::int64_t x, const Section& f) {
	const auto& G = f.bundle->group;
	Section out = f;
	for (std::int64_t t = 0; t < G.order(); ++t) out.at(t) *= abelian::pairing(G, t, x);
	return out;
}

Mat dual_action_unitary(const FellBundle& b, std::int64_t x) {
	const std::int64_t n = b.group.order();
	const int d = b.ambient_dim;
	Mat W = Mat::Zero(n * d, n * d);
	for (std::int64_t t = 0; t < n; ++t)
		W.block(t * d, t * d, d, d) = abelian::pairing(b.group, t, x) * Mat::Identity(d, d);
	return W;
}

double hat_equals_action_check(const Section& f, std::int64_t x) {
	const auto& G = f.bundle->group;
	const std::int64_t n = G.order();
	const Section af = dual_action(x, f);
	double worst = 0.0;
	for (std::int64_t t = 0; t < n; ++t) {
		for (const Mat& b : f.bundle->basis_at(t)) {
			const Section g = delta_section(f.bundle, t, b);
			Section left_sum = zero_section(f.bundle);
			Section right_sum = zero_section(f.bundle);
			for (std::int64_t s = 0; s < n; ++s) {
				const auto Fs = make_multiplier(f.bundle, s, f.at(s));
				const cplx w = abelian::pairing(G, s, x);
				left_sum = add(left_sum, scale(multiplier_apply(Fs, g, Side::Left), w));
				right_sum = add(right_sum, scale(multiplier_apply(Fs, g, Side::Right), w));
			}
			const Section left_ref = convolve(af, g);
			const Section right_ref = convolve(g, af);
			for (std::int64_t s = 0; s < n; ++s) {
				worst = std::max(worst, max_abs(left_sum.at(s) - left_ref.at(s)));
				worst = std::max(worst, max_abs(right_sum.at(s) - right_ref.at(s)));
			}
		}
	}
	return worst;
}

ptype::PositiveTypeVerdict section_positive_type_check(const Section& f) {
	const auto& G = f.bundle->group;
	const Section p = convolve(involve(f), f);
	abelian::OperatorField P =
	    abelian::OperatorField::zeros(G, f.bundle->ambient_dim * static_cast<int>(G.order()));
	for (std::int64_t t = 0; t < G.order(); ++t)
		P.at(t) = regular_representation(delta_section(f.bundle, t, p.at(t)));
	return ptype::check_positive_type(P);
}

namespace {

// sections stacked as (|G| d) x d matrices so the integration engine can
// treat them as one linear value
Mat stack_section(const Section& s) {
	const std::int64_t n = s.bundle->group.order();
	const int d = s.bundle->ambient_dim;
	Mat out(n * d, d);
	for (std::int64_t t = 0; t < n; ++t) out.block(t * d, 0, d, d) = s.at(t);
	return out;
}

Section unstack_section(const BundlePtr& bundle, const Mat& m) {
	const std::int64_t n = bundle->group.order();
	const int d = bundle->ambient_dim;
	std::vector<Mat> vals;
	vals.reserve(static_cast<std::size_t>(n));
	for (std::int64_t t = 0; t < n; ++t) vals.push_back(m.block(t * d, 0, d, d));
	return make_section(bundle, std::move(vals));
}

}  // namespace

MainTheoremResult main_theorem_check(const Section& f, const Section& a, std::int64_t t) {
	require_same_bundle(f.bundle, a.bundle);
	const auto& G = f.bundle->group;
	const std::int64_t n = G.order();
	const int d = f.bundle->ambient_dim;
	const Section p = convolve(involve(f), f);

	auto integrate_side = [&](bool act_right) {
		auto field = ucond::matrix_field(
		    ucond::LocalIntegrationSpace::finite(n, 1.0 / static_cast<double>(n)),
		    [&, act_right](std::int64_t x) {
			    const Section ap = dual_action(x, p);
			    const Section prod = act_right ? convolve(a, ap) : convolve(ap, a);
			    return Mat(stack_section(prod) * std::conj(abelian::pairing(G, t, x)));
		    },
		    n * d, d);
		ucond::TailOracle oracle;
		oracle.kind = ucond::OracleKind::FiniteSupport;
		oracle.witness_for = [n](double) { return ucond::LocalSet::range(0, n - 1); };
		field.tail = oracle;
		auto res = ucond::u_integrate(field, 1e-12, 8, 0xb0bULL);
		if (std::holds_alternative<ucond::CauchyViolation<Mat>>(res))
			throw Error("finite-support integral reported a Cauchy violation");
		return std::get<ucond::Certificate<Mat>>(res);
	};

	const auto cert_right = integrate_side(true);
	const auto cert_left = integrate_side(false);

	const auto Pt = make_multiplier(f.bundle, t, p.at(t));
	MainTheoremResult r;
	r.lhs_acting_right = unstack_section(f.bundle, cert_right.value);
	r.rhs_acting_right = multiplier_apply(Pt, a, Side::Right);
	r.lhs_acting_left = unstack_section(f.bundle, cert_left.value);
	r.rhs_acting_left = multiplier_apply(Pt, a, Side::Left);
	r.certificate_epsilon = std::max(cert_right.epsilon, cert_left.epsilon);
	r.certificate_status = cert_right.status;
	for (std::int64_t s = 0; s < n; ++s) {
		r.abs_err = std::max(r.abs_err, max_abs(r.lhs_acting_right.at(s) - r.rhs_acting_right.at(s)));
		r.abs_err = std::max(r.abs_err, max_abs(r.lhs_acting_left.at(s) - r.rhs_acting_left.at(s)));
	}
	return r;
}

BundlePtr build_semidirect_bundle(const abelian::FiniteAbelianGroup& g, int a_dim,
                                  const std::vector<Mat>& action,
                                  const std::optional<std::vector<Mat>>& algebra_basis) {
	const std::int64_t n = g.order();
	if (static_cast<std::int64_t>(action.size()) != n)
		throw ValidationError("one action unitary required per group element");
	const Mat id = Mat::Identity(a_dim, a_dim);
	for (std::int64_t t = 0; t < n; ++t) {
		if (action[static_cast<std::size_t>(t)].rows() != a_dim ||
		    action[static_cast<std::size_t>(t)].cols() != a_dim)
			throw ShapeMismatch("action matrix has the wrong dimension");
		if (max_abs(action[static_cast<std::size_t>(t)] *
		                action[static_cast<std::size_t>(t)].adjoint() -
		            id) > 1e-12)
			throw NotUnitary("action at " + std::to_string(t) + " is not unitary");
	}
	for (std::int64_t s = 0; s < n; ++s)
		for (std::int64_t t = 0; t < n; ++t)
			if (max_abs(action[static_cast<std::size_t>(g.add(s, t))] -
			            action[static_cast<std::size_t>(s)] * action[static_cast<std::size_t>(t)]) >
			    1e-12)
				throw NotHomomorphism("action(s)action(t) != action(s+t) at s=" + std::to_string(s) +
				                      ", t=" + std::to_string(t));

	std::vector<Mat> coeff_basis;
	if (algebra_basis) {
		coeff_basis = *algebra_basis;
	} else {
		for (int i = 0; i < a_dim; ++i)
			for (int j = 0; j < a_dim; ++j) {
				Mat e = Mat::Zero(a_dim, a_dim);
				e(i, j) = 1.0;
				coeff_basis.push_back(e);
			}
	}

	// (a, t) sits in ambient dimension a_dim * |G| with block (r, r - t)
	// carrying the twisted copy u(r)* a u(r)
	auto embed = [&](const Mat& a, std::int64_t t) {
		Mat m = Mat::Zero(a_dim * n, a_dim * n);
		for (std::int64_t r = 0; r < n; ++r) {
			const Mat& ur = action[static_cast<std::size_t>(r)];
			m.block(r * a_dim, g.sub(r, t) * a_dim, a_dim, a_dim) = ur.adjoint() * a * ur;
		}
		return m;
	};

	std::vector<std::vector<Mat>> spans(static_cast<std::size_t>(n));
	for (std::int64_t t = 0; t < n; ++t)
		for (const Mat& a : coeff_basis) spans[static_cast<std::size_t>(t)].push_back(embed(a, t));
	return make_bundle(g, a_dim * static_cast<int>(n), std::move(spans));
}

std::vector<std::string> fixture_names() {
	return {"m2z2", "z3-shift"};
}

BundlePtr fixture(const std::string& name) {
	if (name == "m2z2") {
		const auto g = abelian::FiniteAbelianGroup{{2}};
		Mat e00 = Mat::Zero(2, 2), e01 = Mat::Zero(2, 2), e10 = Mat::Zero(2, 2),
		    e11 = Mat::Zero(2, 2);
		e00(0, 0) = 1;
		e01(0, 1) = 1;
		e10(1, 0) = 1;
		e11(1, 1) = 1;
		return make_bundle(g, 2, {{e00, e11}, {e01, e10}});
	}
	if (name == "z3-shift") {
		const auto g = abelian::FiniteAbelianGroup{{3}};
		Mat shift = Mat::Zero(3, 3);
		for (int i = 0; i < 3; ++i) shift((i + 1) % 3, i) = 1.0;
		std::vector<Mat> action = {Mat::Identity(3, 3), shift, Mat(shift * shift)};
		std::vector<Mat> diag_basis;
		for (int i = 0; i < 3; ++i) {
			Mat e = Mat::Zero(3, 3);
			e(i, i) = 1.0;
			diag_basis.push_back(e);
		}
		return build_semidirect_bundle(g, 3, action, diag_basis);
	}
	throw ValidationError("unknown bundle fixture: " + name);
}

}  // namespace ulab::fell
