#pragma once

#include <Eigen/Dense>
#include <complex>

#include "ulab/rng.hpp"

namespace ulab {

using cplx = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline double frobenius(const Mat& m) { return m.norm(); }

inline double max_abs(const Mat& m) {
	return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

// Largest singular value. Desk-scale matrices only, so SVD cost is fine.
inline double operator_norm(const Mat& m) {
	if (m.size() == 0) return 0.0;
	return Eigen::JacobiSVD<Mat>(m).singularValues()(0);
}

inline double min_eigenvalue_hermitian(const Mat& m) {
	Eigen::SelfAdjointEigenSolver<Mat> es((m + m.adjoint()) / 2.0);
	return es.eigenvalues().minCoeff();
}

inline Mat random_gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
	Mat m(rows, cols);
	for (Eigen::Index j = 0; j < cols; ++j)
		for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.gaussian_complex();
	return m;
}

// Haar-like random unitary: QR of a gaussian matrix with the phases of the
// R diagonal pushed into Q so the distribution does not depend on the QR
// implementation's sign conventions.
inline Mat random_unitary(Rng& rng, Eigen::Index n) {
	const Mat g = random_gaussian(rng, n, n);
	Eigen::HouseholderQR<Mat> qr(g);
	Mat q = qr.householderQ();
	const Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
	for (Eigen::Index j = 0; j < n; ++j) {
		const cplx d = r(j, j);
		const double a = std::abs(d);
		q.col(j) *= (a > 0) ? d / a : cplx(1, 0);
	}
	return q;
}

inline Vec random_vector(Rng& rng, Eigen::Index n) {
	Vec v(n);
	for (Eigen::Index i = 0; i < n; ++i) v(i) = rng.gaussian_complex();
	return v;
}

}  // namespace ulab
