#pragma once

#include <sstream>

#include "ulab/linalg.hpp"
#include "ulab/ucond.hpp"

namespace ulab::ucond {

template <>
inline void check_same_shape<Mat>(const Mat& a, const Mat& b) {
	if (a.rows() != b.rows() || a.cols() != b.cols()) {
		std::ostringstream os;
		os << "matrix shapes disagree: " << a.rows() << "x" << a.cols() << " vs " << b.rows()
		   << "x" << b.cols();
		throw ShapeMismatch(os.str());
	}
}

inline VectorField<Mat> matrix_field(LocalIntegrationSpace space,
                                     std::function<Mat(std::int64_t)> value, Eigen::Index rows,
                                     Eigen::Index cols) {
	VectorField<Mat> f;
	f.space = std::move(space);
	f.value = std::move(value);
	f.zero = Mat::Zero(rows, cols);
	f.norm = [](const Mat& m) { return frobenius(m); };
	return f;
}

}  // namespace ulab::ucond
