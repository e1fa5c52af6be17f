#pragma once

#include <cstddef>
#include <deque>
#include <vector>

#include <Eigen/Dense>

namespace porogrowth {

/// Anderson mixing for x = G(x). Given the current iterate x and its image
/// G(x), returns the next iterate G(x) - dG gamma, where gamma minimises
/// || W (f - dF gamma) ||_2 over the last `depth` residual differences
/// (f = G(x) - x, W a fixed diagonal weight). Depth 0 is plain iteration.
class AndersonMixer {
public:
  AndersonMixer(std::size_t depth, std::vector<double> weights)
      : depth_(depth), w_(Eigen::Map<const Eigen::VectorXd>(weights.data(),
                                                            static_cast<Eigen::Index>(weights.size()))) {}

  std::vector<double> next(const std::vector<double>& x, const std::vector<double>& gx) {
    const auto n = static_cast<Eigen::Index>(x.size());
    Eigen::Map<const Eigen::VectorXd> X(x.data(), n), G(gx.data(), n);
    const Eigen::VectorXd f = w_.cwiseProduct(G - X);

    if (has_prev_ && depth_ > 0) {
      df_.push_back(f - f_prev_);
      dg_.push_back(G - g_prev_);
      if (df_.size() > depth_) {
        df_.pop_front();
        dg_.pop_front();
      }
    }
    f_prev_ = f;
    g_prev_ = G;
    has_prev_ = true;
    if (df_.empty()) return gx;

    const auto m = static_cast<Eigen::Index>(df_.size());
    Eigen::MatrixXd dF(n, m), dG(n, m);
    for (Eigen::Index j = 0; j < m; ++j) {
      dF.col(j) = df_[static_cast<std::size_t>(j)];
      dG.col(j) = dg_[static_cast<std::size_t>(j)];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(dF);
    qr.setThreshold(1.0e-10);
    const Eigen::VectorXd gamma = qr.solve(f);
    const Eigen::VectorXd out = G - dG * gamma;
    return {out.data(), out.data() + n};
  }

  /// Forget the history (after a rejected mixed iterate).
  void reset() {
    df_.clear();
    dg_.clear();
    has_prev_ = false;
  }

private:
  std::size_t depth_;
  Eigen::VectorXd w_;
  std::deque<Eigen::VectorXd> df_, dg_;
  Eigen::VectorXd f_prev_, g_prev_;
  bool has_prev_ = false;
};

} // namespace porogrowth
