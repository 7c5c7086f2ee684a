#include "ulab/positive_type.hpp"

#include <cmath>

#include "ulab/errors.hpp"
#include "ulab/rng.hpp"
#include "ulab/ucond_matrix.hpp"

namespace ulab::ptype {

namespace {

Mat block_gram(const abelian::OperatorField& p) {
	const std::int64_t n = p.group.order();
	const int d = p.dim;
	Mat K(n * d, n * d);
	for (std::int64_t s = 0; s < n; ++s)
		for (std::int64_t t = 0; t < n; ++t)
			K.block(s * d, t * d, d, d) = p.at(p.group.sub(t, s));
	return K;
}

}  // namespace

PositiveTypeVerdict check_positive_type(const abelian::OperatorField& p, double tol) {
	Mat K = block_gram(p);
	PositiveTypeVerdict v;
	const double scale = std::max(1.0, frobenius(K));
	v.hermitian_defect = max_abs(K - K.adjoint());
	if (v.hermitian_defect > 1e-10 * scale)
		throw HermitianDefect("Gram matrix is not Hermitian: p(-t) != p(t)* in the data");
	Eigen::SelfAdjointEigenSolver<Mat> es((K + K.adjoint()) / 2.0);
	v.min_eigenvalue = es.eigenvalues().minCoeff();
	const double eig_scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
	v.is_positive_type = v.min_eigenvalue >= -tol * eig_scale;
	v.witness_points.resize(static_cast<std::size_t>(p.group.order()));
	for (std::size_t i = 0; i < v.witness_points.size(); ++i)
		v.witness_points[i] = static_cast<std::int64_t>(i);
	return v;
}

NaimarkDilation naimark_dilate(const abelian::OperatorField& p, double tol) {
	const auto verdict = check_positive_type(p, tol);
	if (!verdict.is_positive_type)
		throw NotPositiveType("min eigenvalue " + std::to_string(verdict.min_eigenvalue));

	const std::int64_t n = p.group.order();
	const int d = p.dim;
	Mat K = block_gram(p);
	Eigen::SelfAdjointEigenSolver<Mat> es((K + K.adjoint()) / 2.0);
	const Vec evals = es.eigenvalues().cast<cplx>();
	const double lam_max = es.eigenvalues().cwiseAbs().maxCoeff();
	const double cutoff = std::max(1e-10, 1e-12 * lam_max);

	std::vector<Eigen::Index> keep;
	for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
		if (es.eigenvalues()(i) > cutoff) keep.push_back(i);

	const auto m = static_cast<Eigen::Index>(keep.size());
	Mat U(n * d, m);
	Vec lam(m);
	for (Eigen::Index j = 0; j < m; ++j) {
		U.col(j) = es.eigenvectors().col(keep[static_cast<std::size_t>(j)]);
		lam(j) = evals(keep[static_cast<std::size_t>(j)]);
	}

	NaimarkDilation dil;
	dil.group = p.group;
	dil.dim = d;
	dil.dilation_dim = m;
	dil.cutoff = cutoff;

	// block translation by r sends block row s to block row s - r; since it
	// commutes with K, its compression to the kept eigenspace is unitary
	dil.rep.reserve(static_cast<std::size_t>(n));
	for (std::int64_t r = 0; r < n; ++r) {
		Mat shifted(n * d, m);
		for (std::int64_t s = 0; s < n; ++s)
			shifted.block(s * d, 0, d, m) = U.block(p.group.sub(s, r) * d, 0, d, m);
		dil.rep.push_back(U.adjoint() * shifted);
	}

	Mat v = U.topRows(d).adjoint();  // m x d, block row at the identity
	for (Eigen::Index j = 0; j < m; ++j) v.row(j) *= std::sqrt(lam(j).real());
	dil.embedding = std::move(v);
	return dil;
}

SpectralMeasure spectral_measure(const NaimarkDilation& dil, double tol) {
	const std::int64_t n = dil.group.order();
	const auto m = static_cast<Eigen::Index>(dil.dilation_dim);
	const Mat id = Mat::Identity(m, m);
	for (std::int64_t t = 0; t < n; ++t) {
		if (max_abs(dil.rep_at(t) * dil.rep_at(t).adjoint() - id) > tol)
			throw RepNotUnitary("rep(" + std::to_string(t) + ") is not unitary");
	}
	for (std::int64_t s = 0; s < n; ++s)
		for (std::int64_t t = 0; t < n; ++t)
			if (max_abs(dil.rep_at(dil.group.add(s, t)) - dil.rep_at(s) * dil.rep_at(t)) > tol)
				throw RepNotHomomorphism("rep(s)rep(t) != rep(s+t) at s=" + std::to_string(s) +
				                         ", t=" + std::to_string(t));

	SpectralMeasure E;
	E.group = dil.group;
	E.projections.reserve(static_cast<std::size_t>(n));
	const double mass = 1.0 / static_cast<double>(n);
	for (std::int64_t x = 0; x < n; ++x) {
		Mat acc = Mat::Zero(m, m);
		for (std::int64_t t = 0; t < n; ++t)
			acc += std::conj(abelian::pairing(dil.group, t, x)) * dil.rep_at(t);
		E.projections.push_back(acc * mass);
	}
	return E;
}

Mat SpectralMeasure::sum_over(const std::vector<std::int64_t>& characters) const {
	if (projections.empty()) return Mat();
	Mat acc = Mat::Zero(projections.front().rows(), projections.front().cols());
	for (std::int64_t x : characters) acc += at(x);
	return acc;
}

SpectralDiagnostics spectral_diagnostics(const NaimarkDilation& dil, const SpectralMeasure& E) {
	SpectralDiagnostics d;
	const std::int64_t n = dil.group.order();
	const auto m = static_cast<Eigen::Index>(dil.dilation_dim);
	Mat total = Mat::Zero(m, m);
	for (std::int64_t x = 0; x < n; ++x) {
		const Mat& Ex = E.at(x);
		d.idempotency = std::max(d.idempotency, max_abs(Ex * Ex - Ex));
		d.self_adjointness = std::max(d.self_adjointness, max_abs(Ex - Ex.adjoint()));
		total += Ex;
		for (std::int64_t y = 0; y < n; ++y)
			if (y != x) d.orthogonality = std::max(d.orthogonality, max_abs(E.at(x) * E.at(y)));
	}
	d.completeness = max_abs(total - Mat::Identity(m, m));
	for (std::int64_t t = 0; t < n; ++t) {
		Mat stone = Mat::Zero(m, m);
		for (std::int64_t x = 0; x < n; ++x) stone += abelian::pairing(dil.group, t, x) * E.at(x);
		d.stone = std::max(d.stone, max_abs(stone - dil.rep_at(t)));
	}
	return d;
}

DilationSystem DilationSystem::build(const abelian::OperatorField& p, double tol) {
	DilationSystem sys;
	sys.p = p;
	sys.p_hat = abelian::fourier(p);
	sys.dil = naimark_dilate(p, tol);
	sys.E = spectral_measure(sys.dil, tol);
	return sys;
}

TwoSidedScalar babalu_check(const DilationSystem& sys, const std::vector<cplx>& g, const Vec& xi,
                            const Vec& eta) {
	const auto& G = sys.p.group;
	const std::int64_t n = G.order();
	TwoSidedScalar r;
	for (std::int64_t t = 0; t < n; ++t)
		r.lhs += g.at(static_cast<std::size_t>(t)) * (eta.adjoint() * sys.p.at(t) * xi)(0);

	const auto m = static_cast<Eigen::Index>(sys.dil.dilation_dim);
	Mat weighted = Mat::Zero(m, m);
	for (std::int64_t x = 0; x < n; ++x) {
		cplx ghat{};
		for (std::int64_t t = 0; t < n; ++t)
			ghat += abelian::pairing(G, t, x) * g.at(static_cast<std::size_t>(t));
		weighted += ghat * sys.E.at(x);
	}
	const Vec vxi = sys.dil.embedding * xi;
	const Vec veta = sys.dil.embedding * eta;
	r.rhs = (veta.adjoint() * weighted * vxi)(0);
	r.abs_err = std::abs(r.lhs - r.rhs);
	return r;
}

double equal_measures_check(const DilationSystem& sys, const Vec& xi, const Vec& eta) {
	const auto& G = sys.p.group;
	const std::int64_t n = G.order();
	const double mass = 1.0 / static_cast<double>(n);
	const Vec vxi = sys.dil.embedding * xi;
	const Vec veta = sys.dil.embedding * eta;
	double worst = 0.0;
	for (std::int64_t x = 0; x < n; ++x) {
		const cplx lhs = (eta.adjoint() * sys.p_hat.at(G.neg(x)) * xi)(0) * mass;
		const cplx rhs = (veta.adjoint() * sys.E.at(x) * vxi)(0);
		worst = std::max(worst, std::abs(lhs - rhs));
	}
	return worst;
}

CombinedResult combined_check(const DilationSystem& sys, std::int64_t t,
                              const std::vector<std::int64_t>& L) {
	const auto& G = sys.p.group;
	const double mass = 1.0 / static_cast<double>(G.order());
	CombinedResult r;
	r.lhs = Mat::Zero(sys.p.dim, sys.p.dim);
	std::vector<std::int64_t> negL;
	negL.reserve(L.size());
	for (std::int64_t x : L) {
		r.lhs += std::conj(abelian::pairing(G, t, x)) * sys.p_hat.at(x) * mass;
		negL.push_back(G.neg(x));
	}
	const auto m = static_cast<Eigen::Index>(sys.dil.dilation_dim);
	const Mat EL = L.empty() ? Mat::Zero(m, m) : sys.E.sum_over(negL);
	const Mat& V = sys.dil.embedding;
	r.rhs_measure_first = V.adjoint() * EL * sys.dil.rep_at(t) * V;
	r.rhs_rep_first = V.adjoint() * sys.dil.rep_at(t) * EL * V;
	r.abs_err = std::max(max_abs(r.lhs - r.rhs_measure_first), max_abs(r.lhs - r.rhs_rep_first));
	r.ordering_gap = max_abs(r.rhs_measure_first - r.rhs_rep_first);
	return r;
}

InversionResult inversion_check_with(const abelian::OperatorField& p,
                                     const abelian::OperatorField& p_hat, std::int64_t t) {
	const auto& G = p.group;
	const std::int64_t n = G.order();
	auto field = ucond::matrix_field(
	    ucond::LocalIntegrationSpace::finite(n, 1.0 / static_cast<double>(n)),
	    [&G, &p_hat, t](std::int64_t x) {
		    return Mat(std::conj(abelian::pairing(G, t, x)) * p_hat.at(x));
	    },
	    p.dim, p.dim);
	ucond::TailOracle oracle;
	oracle.kind = ucond::OracleKind::FiniteSupport;
	oracle.witness_for = [n](double) { return ucond::LocalSet::range(0, n - 1); };
	field.tail = oracle;

	auto res = ucond::u_integrate(field, 1e-12, 8, 0xfeedULL);
	if (std::holds_alternative<ucond::CauchyViolation<Mat>>(res))
		throw Error("finite-support integral reported a Cauchy violation");
	auto& cert = std::get<ucond::Certificate<Mat>>(res);

	InversionResult out;
	out.value = cert.value;
	out.abs_err = max_abs(cert.value - p.at(t));
	out.status = cert.status;
	out.certificate_epsilon = cert.epsilon;
	return out;
}

InversionResult inversion_check(const abelian::OperatorField& p, std::int64_t t, double tol) {
	const auto verdict = check_positive_type(p, tol);
	if (!verdict.is_positive_type)
		throw NotPositiveType("min eigenvalue " + std::to_string(verdict.min_eigenvalue));
	return inversion_check_with(p, abelian::fourier(p), t);
}

abelian::OperatorField random_positive_type(const abelian::FiniteAbelianGroup& g, int dim,
                                            std::uint64_t seed) {
	const std::int64_t n = g.order();
	const auto m = static_cast<Eigen::Index>(n + dim);
	Rng rng(seed);
	const Mat W = random_unitary(rng, m);

	std::vector<std::int64_t> slot_char(static_cast<std::size_t>(m));
	for (auto& s : slot_char) s = rng.uniform_int(0, n - 1);

	std::vector<Mat> proj(static_cast<std::size_t>(n), Mat::Zero(m, m));
	for (Eigen::Index i = 0; i < m; ++i) {
		const auto x = static_cast<std::size_t>(slot_char[static_cast<std::size_t>(i)]);
		proj[x] += W.col(i) * W.col(i).adjoint();
	}

	Mat v0 = random_gaussian(rng, m, dim) / std::sqrt(static_cast<double>(m));

	abelian::OperatorField p = abelian::OperatorField::zeros(g, dim);
	for (std::int64_t t = 0; t < n; ++t) {
		Mat u = Mat::Zero(m, m);
		for (std::int64_t x = 0; x < n; ++x)
			u += abelian::pairing(g, t, x) * proj[static_cast<std::size_t>(x)];
		p.at(t) = v0.adjoint() * u * v0;
	}
	return p;
}

}  // namespace ulab::ptype
