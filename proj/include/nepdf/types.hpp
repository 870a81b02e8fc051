#pragma once

#include <Eigen/Core>

#include "nepdf/error.hpp"

namespace nepdf {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using MatrixXd = Matrix<double>;
using MatrixXf = Matrix<float>;
using VectorXd = Vector<double>;
using VectorXf = Vector<float>;

//! Fixed class encoding: label 1 -> index 0, label -1 -> index 1,
//! label 0 -> index 2. Two-class networks use the first two entries.
inline int label_to_class_index(int label, int n_classes) {
  switch (label) {
    case 1:
      return 0;
    case -1:
      return 1;
    case 0:
      if (n_classes == 3) return 2;
      break;
    default:
      break;
  }
  throw LabelOutOfRange("label " + std::to_string(label) +
                        " not representable with " +
                        std::to_string(n_classes) + " classes");
}

inline int class_index_to_label(int index, int n_classes) {
  static constexpr int table[3] = {1, -1, 0};
  if (index < 0 || index >= n_classes || n_classes > 3)
    throw LabelOutOfRange("class index " + std::to_string(index) +
                          " out of range");
  return table[index];
}

//! Encoding for the dependent/independent classifier: dependent (|label| = 1)
//! is index 0, independent (label 0) is index 1.
inline int dependence_class_index(int label) {
  if (label == 1 || label == -1) return 0;
  if (label == 0) return 1;
  throw LabelOutOfRange("label " + std::to_string(label));
}

}  // namespace nepdf
