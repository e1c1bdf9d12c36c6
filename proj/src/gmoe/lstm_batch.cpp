#include "gmoe/lstm_batch.hpp"

namespace liftrisk {

Eigen::MatrixXd lstm_forward_batched(const LstmParams& params,
                                     const std::vector<Eigen::MatrixXd>& xs,
                                     LstmCache* cache) {
  const int hidden = static_cast<int>(params.wh.cols());
  const int steps = static_cast<int>(xs.size());
  const int batch = steps > 0 ? static_cast<int>(xs[0].rows()) : 0;

  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(batch, hidden);
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(batch, hidden);
  if (cache) {
    cache->x = xs;
    cache->h.assign(1, h);
    cache->c.assign(1, c);
    cache->gi.clear();
    cache->gf.clear();
    cache->gg.clear();
    cache->go.clear();
    cache->tanh_c.clear();
  }

  for (int t = 0; t < steps; ++t) {
    Eigen::MatrixXd z = xs[t] * params.wx.transpose();
    z.noalias() += h * params.wh.transpose();
    z.rowwise() += params.b.transpose();

    const auto sig = [](double v) { return 1.0 / (1.0 + std::exp(-v)); };
    Eigen::MatrixXd gi = z.leftCols(hidden).unaryExpr(sig);
    Eigen::MatrixXd gf = z.middleCols(hidden, hidden).unaryExpr(sig);
    Eigen::MatrixXd gg =
        z.middleCols(2 * hidden, hidden).array().tanh().matrix();
    Eigen::MatrixXd go = z.rightCols(hidden).unaryExpr(sig);

    c = gf.cwiseProduct(c) + gi.cwiseProduct(gg);
    Eigen::MatrixXd tc = c.array().tanh().matrix();
    h = go.cwiseProduct(tc);

    if (cache) {
      cache->gi.push_back(std::move(gi));
      cache->gf.push_back(std::move(gf));
      cache->gg.push_back(std::move(gg));
      cache->go.push_back(std::move(go));
      cache->tanh_c.push_back(std::move(tc));
      cache->h.push_back(h);
      cache->c.push_back(c);
    }
  }
  return h;
}

NetGrads zero_grads(const LstmParams& params) {
  NetGrads g;
  g.wx = Eigen::MatrixXd::Zero(params.wx.rows(), params.wx.cols());
  g.wh = Eigen::MatrixXd::Zero(params.wh.rows(), params.wh.cols());
  g.b = Eigen::VectorXd::Zero(params.b.size());
  g.wout = Eigen::MatrixXd::Zero(params.wout.rows(), params.wout.cols());
  g.bout = Eigen::VectorXd::Zero(params.bout.size());
  return g;
}

void lstm_backward_batched(const LstmParams& params, const LstmCache& cache,
                           const Eigen::MatrixXd& dh_final, NetGrads& grads) {
  const int hidden = static_cast<int>(params.wh.cols());
  const int steps = static_cast<int>(cache.x.size());

  Eigen::MatrixXd dh = dh_final;
  Eigen::MatrixXd dc =
      Eigen::MatrixXd::Zero(dh_final.rows(), dh_final.cols());
  Eigen::MatrixXd dz(dh_final.rows(), 4 * hidden);

  for (int t = steps - 1; t >= 0; --t) {
    const Eigen::MatrixXd& gi = cache.gi[t];
    const Eigen::MatrixXd& gf = cache.gf[t];
    const Eigen::MatrixXd& gg = cache.gg[t];
    const Eigen::MatrixXd& go = cache.go[t];
    const Eigen::MatrixXd& tc = cache.tanh_c[t];
    const Eigen::MatrixXd& c_prev = cache.c[t];

    const Eigen::MatrixXd d_o = dh.cwiseProduct(tc);
    dc += dh.cwiseProduct(go).cwiseProduct(
        (1.0 - tc.array().square()).matrix());

    const Eigen::MatrixXd d_i = dc.cwiseProduct(gg);
    const Eigen::MatrixXd d_g = dc.cwiseProduct(gi);
    const Eigen::MatrixXd d_f = dc.cwiseProduct(c_prev);

    dz.leftCols(hidden) =
        d_i.cwiseProduct(gi).cwiseProduct((1.0 - gi.array()).matrix());
    dz.middleCols(hidden, hidden) =
        d_f.cwiseProduct(gf).cwiseProduct((1.0 - gf.array()).matrix());
    dz.middleCols(2 * hidden, hidden) =
        d_g.cwiseProduct((1.0 - gg.array().square()).matrix());
    dz.rightCols(hidden) =
        d_o.cwiseProduct(go).cwiseProduct((1.0 - go.array()).matrix());

    grads.wx.noalias() += dz.transpose() * cache.x[t];
    grads.wh.noalias() += dz.transpose() * cache.h[t];
    grads.b += dz.colwise().sum().transpose();

    dh.noalias() = dz * params.wh;
    dc = dc.cwiseProduct(gf);
  }
}

}  // namespace liftrisk
