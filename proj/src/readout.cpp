#include "qrc/readout.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qrc {

ReadoutWeights train_linear(const FeatureMatrix& x, const Vector& targets, double ridge) {
  if (x.rows() != targets.size())
    throw DimensionError("train_linear: " + std::to_string(x.rows()) + " feature rows but " +
                         std::to_string(targets.size()) + " targets");
  if (x.rows() == 0) throw DomainError("train_linear: no training rows");
  if (!(ridge >= 0.0)) throw DomainError("train_linear: ridge must be non-negative");

  // Centering removes the unpenalized bias from the problem.
  const Eigen::RowVectorXd x_mean = x.colwise().mean();
  const double y_mean = targets.mean();
  const Matrix centered = x.rowwise() - x_mean;
  const Vector y_centered = targets.array() - y_mean;

  ReadoutWeights out;
  if (x.cols() == 0) {
    out.weights = Vector(0);
    out.bias = y_mean;
    return out;
  }

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
  if (ridge > 0.0) {
    Matrix augmented(x.rows() + x.cols(), x.cols());
    augmented << centered, std::sqrt(ridge) * Matrix::Identity(x.cols(), x.cols());
    Vector rhs = Vector::Zero(augmented.rows());
    rhs.head(x.rows()) = y_centered;
    cod.compute(augmented);
    out.weights = cod.solve(rhs);
  } else {
    cod.compute(centered);
    out.weights = cod.solve(y_centered);
  }
  out.diagnostics.rank = cod.rank();
  out.diagnostics.rank_deficient = cod.rank() < x.cols();
  out.bias = y_mean - x_mean.dot(out.weights);
  if (!out.weights.allFinite() || !std::isfinite(out.bias))
    throw NumericalError("train_linear: non-finite weights");
  return out;
}

Vector predict(const FeatureMatrix& x, const ReadoutWeights& w) {
  if (x.cols() != w.weights.size())
    throw DimensionError("predict: " + std::to_string(x.cols()) + " features but " +
                         std::to_string(w.weights.size()) + " weights");
  return (x * w.weights).array() + w.bias;
}

double mse(const Vector& y, const Vector& ybar) {
  if (y.size() != ybar.size()) throw DimensionError("mse: length mismatch");
  if (y.size() == 0) throw DomainError("mse: empty vectors");
  return (y - ybar).squaredNorm() / static_cast<double>(y.size());
}

double nmse(const Vector& y, const Vector& ybar) {
  const double error = mse(y, ybar);
  const double power = ybar.squaredNorm() / static_cast<double>(ybar.size());
  if (!(power > 0.0)) throw DomainError("nmse: target has zero power");
  return error / power;
}

double nearest_class(double value, const std::vector<double>& class_values) {
  double best = class_values.front();
  double best_gap = std::abs(value - best);
  for (const double c : class_values) {
    const double gap = std::abs(value - c);
    if (gap < best_gap) {
      best = c;
      best_gap = gap;
    }
  }
  return best;
}

namespace {

void check_classes(const std::vector<double>& classes) {
  if (classes.empty()) throw DomainError("classifier: no class values");
  if (classes.size() < 2) return;
  const double spacing = classes[1] - classes[0];
  if (!(spacing > 0.0)) throw DomainError("classifier: class values must be strictly increasing");
  for (std::size_t i = 1; i < classes.size(); ++i) {
    const double gap = classes[i] - classes[i - 1];
    if (std::abs(gap - spacing) > 1e-9 * std::max(1.0, std::abs(spacing)))
      throw DomainError("classifier: class values must be equally spaced");
  }
}

double decoded_accuracy(const Vector& predictions, double shift, const Vector& labels,
                        const std::vector<double>& classes) {
  Index hits = 0;
  for (Index i = 0; i < predictions.size(); ++i)
    if (nearest_class(predictions[i] + shift, classes) == labels[i]) ++hits;
  return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

}  // namespace

ClassifierModel train_classifier(const FeatureMatrix& x, const Vector& labels,
                                 std::vector<double> class_values, double ridge) {
  check_classes(class_values);
  for (Index i = 0; i < labels.size(); ++i)
    if (std::find(class_values.begin(), class_values.end(), labels[i]) == class_values.end())
      throw DomainError("train_classifier: label " + std::to_string(labels[i]) +
                        " is not a class value");

  ClassifierModel model;
  model.regressor = train_linear(x, labels, ridge);
  model.class_values = std::move(class_values);
  if (model.class_values.size() < 2) return model;

  const Vector predictions = predict(x, model.regressor);
  const double spacing = model.class_values[1] - model.class_values[0];
  constexpr int kGrid = 2001;
  double best_accuracy = -1.0;
  double best_shift = 0.0;
  for (int k = 0; k < kGrid; ++k) {
    const double shift = -spacing + 2.0 * spacing * k / (kGrid - 1);
    const double accuracy = decoded_accuracy(predictions, shift, labels, model.class_values);
    const bool better = accuracy > best_accuracy ||
                        (accuracy == best_accuracy && std::abs(shift) < std::abs(best_shift));
    if (better) {
      best_accuracy = accuracy;
      best_shift = shift;
    }
  }
  model.bias_shift = best_shift;
  return model;
}

Vector classify(const ClassifierModel& model, const FeatureMatrix& x) {
  const Vector predictions = predict(x, model.regressor);
  Vector out(predictions.size());
  for (Index i = 0; i < predictions.size(); ++i)
    out[i] = nearest_class(predictions[i] + model.bias_shift, model.class_values);
  return out;
}

double success_rate(const Vector& predicted, const Vector& truth) {
  if (predicted.size() != truth.size()) throw DimensionError("success_rate: length mismatch");
  if (predicted.size() == 0) throw DomainError("success_rate: empty vectors");
  return (predicted.array() == truth.array()).cast<double>().mean();
}

double capacity(const FeatureMatrix& x, const Vector& ybar) {
  if (x.rows() != ybar.size()) throw DimensionError("capacity: row count mismatch");
  const double power = ybar.squaredNorm() / static_cast<double>(ybar.size());
  if (!(power > 0.0)) throw DomainError("capacity: target has zero power");
  const double raw = 1.0 - mse(predict(x, train_linear(x, ybar, 0.0)), ybar) / power;
  if (raw < -1e-10) throw NumericalError("capacity: negative raw value " + std::to_string(raw));
  return std::clamp(raw, 0.0, 1.0);
}

CapacityEstimator::CapacityEstimator(const FeatureMatrix& x) {
  const Index rows = x.rows();
  if (rows == 0) throw DomainError("CapacityEstimator: no rows");
  const Matrix centered = x.rowwise() - x.colwise().mean();
  Eigen::ColPivHouseholderQR<Matrix> qr(centered);
  const Index rank = x.cols() == 0 ? 0 : qr.rank();
  basis_.resize(rows, rank + 1);
  basis_.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(rows)));
  if (rank > 0) {
    Matrix q = Matrix::Identity(rows, rank);
    q.applyOnTheLeft(qr.householderQ());
    basis_.rightCols(rank) = q;
  }
}

double CapacityEstimator::operator()(const Vector& y) const {
  if (y.size() != basis_.rows()) throw DimensionError("CapacityEstimator: length mismatch");
  const double power = y.squaredNorm();
  if (!(power > 0.0)) throw DomainError("capacity: target has zero power");
  const double explained = (basis_.transpose() * y).squaredNorm();
  return std::clamp(explained / power, 0.0, 1.0);
}

}  // namespace qrc
