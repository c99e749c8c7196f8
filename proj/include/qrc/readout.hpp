#pragma once

#include <vector>

#include "qrc/types.hpp"

namespace qrc {

struct TrainDiagnostics {
  Index rank = 0;               // numerical rank of the centered features
  bool rank_deficient = false;  // minimum-norm solution was returned
};

/// Linear output layer y = X w + bias.
struct ReadoutWeights {
  Vector weights;
  double bias = 0.0;
  TrainDiagnostics diagnostics;
};

/// Minimizes sum_k (y_k - x_k.w - bias)^2 + ridge |w|^2. The bias is not
/// penalized. Uses a complete orthogonal decomposition, so rank-deficient
/// features yield the minimum-norm weights.
ReadoutWeights train_linear(const FeatureMatrix& x, const Vector& targets, double ridge = 0.0);

Vector predict(const FeatureMatrix& x, const ReadoutWeights& w);

/// (1/L) sum (y - ybar)^2
double mse(const Vector& y, const Vector& ybar);

/// mse / <ybar^2>; throws DomainError when the target has zero power.
double nmse(const Vector& y, const Vector& ybar);

struct ClassifierModel {
  ReadoutWeights regressor;
  std::vector<double> class_values;  // strictly increasing, equally spaced
  double bias_shift = 0.0;
};

/// Nearest class value to `value`; ties go to the smaller class.
double nearest_class(double value, const std::vector<double>& class_values);

/// Least-squares regression onto the labels followed by a scan of 2001
/// bias offsets over [-spacing, spacing] that maximizes training accuracy
/// under nearest-class decoding (ties: smallest |offset|, then the more
/// negative one).
ClassifierModel train_classifier(const FeatureMatrix& x, const Vector& labels,
                                 std::vector<double> class_values, double ridge = 0.0);

Vector classify(const ClassifierModel& model, const FeatureMatrix& x);

/// Fraction of entries where predicted == truth.
double success_rate(const Vector& predicted, const Vector& truth);

/// 1 - min_w MSE / <ybar^2>, clamped to [0, 1].
double capacity(const FeatureMatrix& x, const Vector& ybar);

// Orthonormal basis of span(1, X), factored once and reused for many targets.
// capacity(y) = |P y|^2 / |y|^2 with P the projector onto that span, which
// equals the least-squares route of `capacity` above.
class CapacityEstimator {
 public:
  explicit CapacityEstimator(const FeatureMatrix& x);

  double operator()(const Vector& y) const;
  Index rank() const { return basis_.cols(); }
  Index rows() const { return basis_.rows(); }

 private:
  Matrix basis_;
};

}  // namespace qrc
