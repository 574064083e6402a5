#include "asel/dgp.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace asel::dgp {

using ordered_json = nlohmann::ordered_json;

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// stacked indices of the observed vector (A, H_pi)
std::vector<int> observed_indices(const DgpSpec& spec, const Subset& pi) {
  std::vector<int> idx;
  const int d_a = spec.d_a();
  for (int c = 0; c < d_a; ++c) idx.push_back(c);
  int h_off = 0;
  for (int j = 0; j < spec.j_count(); ++j) {
    const int w = spec.h_widths[static_cast<std::size_t>(j)];
    if (pi.contains(j))
      for (int k = 0; k < w; ++k) idx.push_back(d_a + h_off + k);
    h_off += w;
  }
  return idx;
}

std::vector<int> latent_indices(const DgpSpec& spec, const Subset& pi) {
  std::vector<int> idx;
  const int d_a = spec.d_a();
  int h_off = 0;
  for (int j = 0; j < spec.j_count(); ++j) {
    const int w = spec.h_widths[static_cast<std::size_t>(j)];
    if (!pi.contains(j))
      for (int k = 0; k < w; ++k) idx.push_back(d_a + h_off + k);
    h_off += w;
  }
  return idx;
}

Matrix slice(const Matrix& m, const std::vector<int>& rows,
             const std::vector<int>& cols) {
  Matrix out(static_cast<int>(rows.size()), static_cast<int>(cols.size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c)
      out(static_cast<int>(r), static_cast<int>(c)) =
          m(rows[r], cols[c]);
  return out;
}

Vector gather(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<int>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i)
    out(static_cast<int>(i)) = v(idx[i]);
  return out;
}

Vector outcome_coef(const DgpSpec& spec) {
  Vector theta(spec.dim());
  theta.head(spec.d_a()) = spec.gamma;
  theta.tail(spec.d_h()) = spec.beta;
  return theta;
}

}  // namespace

int DgpSpec::d_a() const {
  return std::accumulate(a_widths.begin(), a_widths.end(), 0);
}

int DgpSpec::d_h() const {
  return std::accumulate(h_widths.begin(), h_widths.end(), 0);
}

void DgpSpec::validate() const {
  if (a_widths.empty() || a_widths.size() != h_widths.size())
    throw ConfigError("dgp: aspect width lists must match and be non-empty");
  for (int w : a_widths)
    if (w < 1) throw ConfigError("dgp: block width must be >= 1");
  for (int w : h_widths)
    if (w < 1) throw ConfigError("dgp: block width must be >= 1");
  if (components.empty()) throw ConfigError("dgp: needs >= 1 component");
  double wsum = 0.0;
  for (const auto& c : components) {
    if (!(c.weight > 0.0)) throw ConfigError("dgp: weights must be positive");
    wsum += c.weight;
    if (c.mu.size() != dim() || c.sigma.rows() != dim() ||
        c.sigma.cols() != dim())
      throw ConfigError("dgp: component dimensions do not match widths");
    if (!c.sigma.isApprox(c.sigma.transpose(), 1e-12))
      throw ConfigError("dgp: covariance must be symmetric");
    Eigen::LLT<Matrix> llt(c.sigma);
    if (llt.info() != Eigen::Success)
      throw ConfigError("dgp: covariance must be positive definite");
  }
  if (std::abs(wsum - 1.0) > 1e-9)
    throw ConfigError("dgp: component weights must sum to 1");
  if (gamma.size() != d_a() || beta.size() != d_h())
    throw ConfigError("dgp: gamma/beta lengths do not match widths");
  if (noise_std < 0.0) throw ConfigError("dgp: noise_std must be >= 0");
  if (ai_bias && ai_bias->size() != j_count())
    throw ConfigError("dgp: bias vector must have one entry per aspect");
}

DgpSpec make_proxy_spec(int j_count, const Matrix& sigma_h, double loading,
                        double noise_a, const Vector& bias,
                        const Vector& gamma, const Vector& beta,
                        double intercept, double noise_std) {
  if (sigma_h.rows() != j_count || bias.size() != j_count)
    throw ConfigError("make_proxy_spec: dimension mismatch");
  DgpSpec spec;
  spec.a_widths.assign(static_cast<std::size_t>(j_count), 1);
  spec.h_widths.assign(static_cast<std::size_t>(j_count), 1);
  spec.gamma = gamma;
  spec.beta = beta;
  spec.intercept = intercept;
  spec.noise_std = noise_std;
  spec.ai_bias = bias;

  Component comp;
  comp.weight = 1.0;
  comp.mu = Vector::Zero(2 * j_count);
  comp.mu.head(j_count) = bias;
  comp.sigma = Matrix::Zero(2 * j_count, 2 * j_count);
  const Matrix cross = loading * sigma_h;
  comp.sigma.topLeftCorner(j_count, j_count) =
      loading * loading * sigma_h +
      noise_a * noise_a * Matrix::Identity(j_count, j_count);
  comp.sigma.topRightCorner(j_count, j_count) = cross;
  comp.sigma.bottomLeftCorner(j_count, j_count) = cross.transpose();
  comp.sigma.bottomRightCorner(j_count, j_count) = sigma_h;
  spec.components.push_back(std::move(comp));
  spec.validate();
  return spec;
}

namespace {

Matrix exchangeable(int n, double rho) {
  return (1.0 - rho) * Matrix::Identity(n, n) +
         rho * Matrix::Ones(n, n);
}

DgpSpec preset_symmetric(int J) {
  const Vector ones = Vector::Ones(J);
  DgpSpec s = make_proxy_spec(J, exchangeable(J, 0.2), 0.7, std::sqrt(0.51),
                              Vector::Zero(J), 0.25 * ones, 0.6 * ones, 0.3,
                              0.7);
  s.name = "symmetric";
  return s;
}

DgpSpec preset_planted_pair(int J) {
  if (J < 8) throw ConfigError("planted-pair preset needs J >= 8");
  const Vector ones = Vector::Ones(J);
  Vector beta = 0.12 * ones;
  beta(2) = 0.9;
  beta(7) = 0.9;
  DgpSpec s = make_proxy_spec(J, Matrix::Identity(J, J), 0.5, std::sqrt(0.75),
                              Vector::Zero(J), 0.15 * ones, beta, 0.2, 0.6);
  s.name = "planted-pair";
  return s;
}

DgpSpec preset_single_informative(int J) {
  const Vector ones = Vector::Ones(J);
  Vector beta = Vector::Zero(J);
  beta(0) = 1.0;
  DgpSpec s = make_proxy_spec(J, Matrix::Identity(J, J), 0.6, 0.8,
                              Vector::Zero(J), 0.05 * ones, beta, 0.0, 0.5);
  s.name = "single-informative";
  return s;
}

DgpSpec preset_biased_ai(int J) {
  if (J < 4) throw ConfigError("biased-ai preset needs J >= 4");
  const Vector ones = Vector::Ones(J);
  Vector bias = 0.15 * ones;
  bias(3) = 1.0;
  DgpSpec s = make_proxy_spec(J, Matrix::Identity(J, J), 1.0, 0.5, bias,
                              0.2 * ones, 0.5 * ones, 0.0, 0.5);
  s.name = "biased-ai";
  return s;
}

// Two regimes that share the H|A regression slope but differ in the residual
// scale of H, so Var(H | A) genuinely varies with where A lands.
DgpSpec preset_heteroskedastic(int J) {
  DgpSpec spec;
  spec.name = "heteroskedastic";
  spec.a_widths.assign(static_cast<std::size_t>(J), 1);
  spec.h_widths.assign(static_cast<std::size_t>(J), 1);
  const Vector ones = Vector::Ones(J);
  spec.gamma = 0.2 * ones;
  spec.beta = 0.7 * ones;
  spec.intercept = 0.0;
  spec.noise_std = 0.4;

  const double centers[2] = {-1.2, 1.2};
  const double h_scales[2] = {0.3, 1.0};
  for (int r = 0; r < 2; ++r) {
    Component c;
    c.weight = 0.5;
    c.mu = Vector::Zero(2 * J);
    c.mu.head(J) = centers[r] * ones;
    c.sigma = Matrix::Zero(2 * J, 2 * J);
    c.sigma.topLeftCorner(J, J) = Matrix::Identity(J, J);
    c.sigma.topRightCorner(J, J) = 0.6 * Matrix::Identity(J, J);
    c.sigma.bottomLeftCorner(J, J) = 0.6 * Matrix::Identity(J, J);
    c.sigma.bottomRightCorner(J, J) =
        (0.36 + h_scales[r] * h_scales[r]) * Matrix::Identity(J, J);
    spec.components.push_back(std::move(c));
  }
  spec.validate();
  return spec;
}

}  // namespace

DgpSpec preset(const std::string& name, int j_count) {
  if (name == "symmetric") return preset_symmetric(j_count > 0 ? j_count : 10);
  if (name == "planted-pair")
    return preset_planted_pair(j_count > 0 ? j_count : 10);
  if (name == "single-informative")
    return preset_single_informative(j_count > 0 ? j_count : 10);
  if (name == "biased-ai") return preset_biased_ai(j_count > 0 ? j_count : 10);
  if (name == "heteroskedastic")
    return preset_heteroskedastic(j_count > 0 ? j_count : 4);
  throw ConfigError("unknown preset '" + name + "'");
}

std::vector<std::string> preset_names() {
  return {"symmetric", "planted-pair", "single-informative", "biased-ai",
          "heteroskedastic"};
}

DgpSpec load_dgp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IngestError("dgp: cannot open " + path);
  ordered_json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw IngestError("dgp: parse failure in " + path + ": " + e.what());
  }
  DgpSpec spec;
  try {
    spec.name = j.value("name", "");
    spec.a_widths = j.at("a_widths").get<std::vector<int>>();
    spec.h_widths = j.at("h_widths").get<std::vector<int>>();
    const auto gamma = j.at("gamma").get<std::vector<double>>();
    const auto beta = j.at("beta").get<std::vector<double>>();
    spec.gamma = Eigen::Map<const Vector>(gamma.data(),
                                          static_cast<int>(gamma.size()));
    spec.beta =
        Eigen::Map<const Vector>(beta.data(), static_cast<int>(beta.size()));
    spec.intercept = j.at("intercept").get<double>();
    spec.noise_std = j.at("noise_std").get<double>();
    spec.seed = j.value("seed", 0ULL);
    if (j.contains("ai_bias")) {
      const auto b = j.at("ai_bias").get<std::vector<double>>();
      spec.ai_bias =
          Eigen::Map<const Vector>(b.data(), static_cast<int>(b.size()));
    }
    for (const auto& cj : j.at("components")) {
      Component c;
      c.weight = cj.at("weight").get<double>();
      const auto mu = cj.at("mu").get<std::vector<double>>();
      c.mu = Eigen::Map<const Vector>(mu.data(), static_cast<int>(mu.size()));
      const auto rows = cj.at("sigma").get<std::vector<std::vector<double>>>();
      c.sigma.resize(static_cast<int>(rows.size()),
                     static_cast<int>(rows.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows.size())
          throw IngestError("dgp: sigma must be square in " + path);
        for (std::size_t cix = 0; cix < rows[r].size(); ++cix)
          c.sigma(static_cast<int>(r), static_cast<int>(cix)) = rows[r][cix];
      }
      spec.components.push_back(std::move(c));
    }
  } catch (const ordered_json::exception& e) {
    throw IngestError("dgp: missing or malformed field in " + path + ": " +
                      e.what());
  }
  spec.validate();
  return spec;
}

void save_dgp(const DgpSpec& spec, const std::string& path) {
  spec.validate();
  ordered_json j;
  j["name"] = spec.name;
  j["a_widths"] = spec.a_widths;
  j["h_widths"] = spec.h_widths;
  j["gamma"] = std::vector<double>(spec.gamma.data(),
                                   spec.gamma.data() + spec.gamma.size());
  j["beta"] = std::vector<double>(spec.beta.data(),
                                  spec.beta.data() + spec.beta.size());
  j["intercept"] = spec.intercept;
  j["noise_std"] = spec.noise_std;
  j["seed"] = spec.seed;
  if (spec.ai_bias)
    j["ai_bias"] = std::vector<double>(
        spec.ai_bias->data(), spec.ai_bias->data() + spec.ai_bias->size());
  j["components"] = ordered_json::array();
  for (const auto& c : spec.components) {
    ordered_json cj;
    cj["weight"] = c.weight;
    cj["mu"] = std::vector<double>(c.mu.data(), c.mu.data() + c.mu.size());
    std::vector<std::vector<double>> rows;
    for (int r = 0; r < c.sigma.rows(); ++r)
      rows.emplace_back(c.sigma.row(r).data(),
                        c.sigma.row(r).data() + c.sigma.cols());
    cj["sigma"] = rows;
    j["components"].push_back(cj);
  }
  std::ofstream out(path);
  if (!out) throw IngestError("dgp: cannot write " + path);
  out << j.dump(2) << '\n';
}

Dataset sample(const DgpSpec& spec, int n, std::uint64_t seed) {
  spec.validate();
  if (n < 1) throw ConfigError("sample: n must be >= 1");

  std::vector<Eigen::LLT<Matrix>> chols;
  std::vector<double> cum;
  double acc = 0.0;
  for (const auto& c : spec.components) {
    chols.emplace_back(c.sigma);
    acc += c.weight;
    cum.push_back(acc);
  }

  const int d = spec.dim();
  const int d_a = spec.d_a();
  const Vector theta = outcome_coef(spec);

  Dataset data;
  data.blocks.a_widths = spec.a_widths;
  data.blocks.h_widths = spec.h_widths;
  data.A.resize(n, d_a);
  data.H.resize(n, spec.d_h());
  data.Y.resize(n);

  Rng rng(seed);
  Vector z(d);
  for (int i = 0; i < n; ++i) {
    std::size_t comp = 0;
    if (spec.components.size() > 1) {
      const double u = rng.uniform01();
      while (comp + 1 < cum.size() && u > cum[comp]) ++comp;
    }
    for (int k = 0; k < d; ++k) z(k) = rng.normal();
    const double eps = rng.normal();
    const Vector v =
        spec.components[comp].mu + chols[comp].matrixL() * z;
    data.A.row(i) = v.head(d_a).transpose();
    data.H.row(i) = v.tail(spec.d_h()).transpose();
    data.Y(i) = theta.dot(v) + spec.intercept + spec.noise_std * eps;
  }
  return data;
}

double ConditionalMean::operator()(const Vector& a, const Vector& h_pi) const {
  Vector obs(a.size() + h_pi.size());
  obs << a, h_pi;
  return at_obs(obs);
}

double ConditionalMean::at_obs(const Vector& obs) const {
  if (obs.size() != obs_dim_)
    throw DimensionError("ConditionalMean: observation width mismatch");
  if (comps_.size() == 1)
    return comps_[0].alpha0 + comps_[0].w.dot(obs);

  // posterior-weighted affine pieces
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logp(comps_.size());
  for (std::size_t r = 0; r < comps_.size(); ++r) {
    const Vector diff = obs - comps_[r].mu_obs;
    const Vector half = comps_[r].chol.matrixL().solve(diff);
    logp[r] = comps_[r].log_weight + comps_[r].log_norm -
              0.5 * half.squaredNorm();
    max_log = std::max(max_log, logp[r]);
  }
  double denom = 0.0;
  for (double lp : logp) denom += std::exp(lp - max_log);
  double m = 0.0;
  for (std::size_t r = 0; r < comps_.size(); ++r) {
    const double q = std::exp(logp[r] - max_log) / denom;
    m += q * (comps_[r].alpha0 + comps_[r].w.dot(obs));
  }
  return m;
}

double ConditionalMean::affine_intercept() const {
  if (!affine()) throw ConfigError("ConditionalMean: not affine (mixture)");
  return comps_[0].alpha0;
}

const Vector& ConditionalMean::affine_weights() const {
  if (!affine()) throw ConfigError("ConditionalMean: not affine (mixture)");
  return comps_[0].w;
}

ConditionalMean oracle_conditional_mean(const DgpSpec& spec, const Subset& pi) {
  spec.validate();
  pi.check_range(spec.j_count());

  const auto obs_idx = observed_indices(spec, pi);
  const auto lat_idx = latent_indices(spec, pi);
  const Vector theta = outcome_coef(spec);

  ConditionalMean cm;
  cm.obs_dim_ = static_cast<int>(obs_idx.size());
  cm.d_a_ = spec.d_a();

  for (const auto& c : spec.components) {
    ConditionalMean::CompTerm term;
    term.log_weight = std::log(c.weight);
    term.mu_obs = gather(c.mu, obs_idx);
    const Matrix sigma_obs = slice(c.sigma, obs_idx, obs_idx);
    term.chol.compute(sigma_obs);
    if (term.chol.info() != Eigen::Success)
      throw SingularityError(
          "oracle_conditional_mean: observed covariance not PD");
    const double log_det =
        2.0 * term.chol.matrixLLT().diagonal().array().log().sum();
    term.log_norm = -0.5 * (log_det + sigma_obs.rows() * kLog2Pi);

    const Vector theta_obs = gather(theta, obs_idx);
    if (lat_idx.empty()) {
      term.alpha0 = spec.intercept;
      term.w = theta_obs;
    } else {
      const Vector theta_lat = gather(theta, lat_idx);
      const Vector mu_lat = gather(c.mu, lat_idx);
      const Matrix sigma_lat_obs = slice(c.sigma, lat_idx, obs_idx);
      // R = Sigma_lat,obs * Sigma_obs^{-1}
      const Matrix R =
          term.chol.solve(sigma_lat_obs.transpose()).transpose();
      term.alpha0 =
          spec.intercept + theta_lat.dot(mu_lat - R * term.mu_obs);
      term.w = theta_obs + R.transpose() * theta_lat;
    }
    cm.comps_.push_back(std::move(term));
  }
  return cm;
}

Vector spectral_solve(const Matrix& sym, const Vector& rhs, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  if (eig.info() != Eigen::Success)
    throw SingularityError("spectral_solve: eigendecomposition failed");
  const Vector& ev = eig.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  if (!(emax > 0.0)) throw SingularityError("spectral_solve: zero matrix");
  Vector x = Vector::Zero(rhs.size());
  for (int k = 0; k < ev.size(); ++k) {
    if (ev(k) > rel_tol * emax) {
      const Vector q = eig.eigenvectors().col(k);
      x += q * (q.dot(rhs) / ev(k));
    }
  }
  return x;
}

OracleMoments oracle_moments(const DgpSpec& spec, const Subset& pi) {
  spec.validate();
  pi.check_range(spec.j_count());
  const Vector theta = outcome_coef(spec);
  const int d = spec.dim();

  Matrix second = Matrix::Zero(d, d);
  Vector mean = Vector::Zero(d);
  Vector vy = Vector::Zero(d);
  double ey = 0.0, ey2 = 0.0;
  for (const auto& c : spec.components) {
    const Matrix s2 = c.sigma + c.mu * c.mu.transpose();
    second += c.weight * s2;
    mean += c.weight * c.mu;
    vy += c.weight * (s2 * theta + spec.intercept * c.mu);
    const double ey_r = theta.dot(c.mu) + spec.intercept;
    ey += c.weight * ey_r;
    ey2 += c.weight * (theta.dot(c.sigma * theta) +
                       spec.noise_std * spec.noise_std + ey_r * ey_r);
  }

  const auto obs_idx = observed_indices(spec, pi);
  const int p = static_cast<int>(obs_idx.size());

  OracleMoments om;
  om.xhat_second_moment.resize(p + 1, p + 1);
  om.xhat_second_moment.topLeftCorner(p, p) = slice(second, obs_idx, obs_idx);
  const Vector mean_obs = gather(mean, obs_idx);
  om.xhat_second_moment.topRightCorner(p, 1) = mean_obs;
  om.xhat_second_moment.bottomLeftCorner(1, p) = mean_obs.transpose();
  om.xhat_second_moment(p, p) = 1.0;

  om.xhat_y.resize(p + 1);
  om.xhat_y.head(p) = gather(vy, obs_idx);
  om.xhat_y(p) = ey;

  om.mean_y = ey;
  om.var_y = ey2 - ey * ey;
  om.theta = spectral_solve(om.xhat_second_moment, om.xhat_y);
  return om;
}

double oracle_reward(const DgpSpec& spec, const Subset& pi) {
  if (!spec.single_component())
    throw ConfigError(
        "oracle_reward: exact squared-mean reward requires a "
        "single-component spec");
  const OracleMoments om = oracle_moments(spec, pi);
  return om.xhat_y.dot(om.theta);
}

Matrix oracle_conditional_xhat_second_moment(const DgpSpec& spec,
                                             const Subset& pi,
                                             const Vector& z) {
  spec.validate();
  pi.check_range(spec.j_count());
  const int d_a = spec.d_a();
  if (z.size() != d_a)
    throw DimensionError("conditional moment: z must have width d_a");

  std::vector<int> a_idx(static_cast<std::size_t>(d_a));
  std::iota(a_idx.begin(), a_idx.end(), 0);
  std::vector<int> h_idx;
  for (int idx : observed_indices(spec, pi))
    if (idx >= d_a) h_idx.push_back(idx);
  const int w = static_cast<int>(h_idx.size());

  // posterior over components given A = z
  std::vector<double> logp(spec.components.size());
  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<Eigen::LLT<Matrix>> chol_a;
  for (std::size_t r = 0; r < spec.components.size(); ++r) {
    const auto& c = spec.components[r];
    const Matrix sigma_a = slice(c.sigma, a_idx, a_idx);
    chol_a.emplace_back(sigma_a);
    if (chol_a.back().info() != Eigen::Success)
      throw SingularityError("conditional moment: A covariance not PD");
    const double log_det =
        2.0 * chol_a.back().matrixLLT().diagonal().array().log().sum();
    const Vector diff = z - c.mu.head(d_a);
    const Vector half = chol_a.back().matrixL().solve(diff);
    logp[r] = std::log(c.weight) - 0.5 * (log_det + d_a * kLog2Pi) -
              0.5 * half.squaredNorm();
    max_log = std::max(max_log, logp[r]);
  }
  double denom = 0.0;
  for (double lp : logp) denom += std::exp(lp - max_log);

  const int p = d_a + w;
  Matrix out = Matrix::Zero(p + 1, p + 1);
  for (std::size_t r = 0; r < spec.components.size(); ++r) {
    const auto& c = spec.components[r];
    const double q = std::exp(logp[r] - max_log) / denom;
    Vector m_h(w);
    Matrix c_h(w, w);
    if (w > 0) {
      const Matrix sigma_ha = slice(c.sigma, h_idx, a_idx);
      const Matrix R = chol_a[r].solve(sigma_ha.transpose()).transpose();
      m_h = gather(c.mu, h_idx) + R * (z - c.mu.head(d_a));
      c_h = slice(c.sigma, h_idx, h_idx) -
            R * slice(c.sigma, a_idx, h_idx);
    }
    Matrix block(p + 1, p + 1);
    block.topLeftCorner(d_a, d_a) = z * z.transpose();
    if (w > 0) {
      block.block(0, d_a, d_a, w) = z * m_h.transpose();
      block.block(d_a, 0, w, d_a) = m_h * z.transpose();
      block.block(d_a, d_a, w, w) = c_h + m_h * m_h.transpose();
      block.block(d_a, p, w, 1) = m_h;
      block.block(p, d_a, 1, w) = m_h.transpose();
    }
    block.block(0, p, d_a, 1) = z;
    block.block(p, 0, 1, d_a) = z.transpose();
    block(p, p) = 1.0;
    out += q * block;
  }
  return out;
}

double oracle_adaptive_linear_reward(const DgpSpec& spec, const Subset& pi,
                                     const Vector& z) {
  const OracleMoments om = oracle_moments(spec, pi);
  const Matrix cond = oracle_conditional_xhat_second_moment(spec, pi, z);
  return om.theta.dot(cond * om.theta);
}

Subset oracle_optimal_subset(const DgpSpec& spec, int n_sel) {
  if (spec.j_count() > 20)
    throw ConfigError("oracle_optimal_subset: J > 20 enumeration guard");
  if (n_sel < 0) throw ConfigError("oracle_optimal_subset: negative budget");
  Subset best;
  double best_reward = -std::numeric_limits<double>::infinity();
  for (const Subset& pi : subsets_up_to(spec.j_count(), n_sel)) {
    const double r = oracle_reward(spec, pi);
    if (r > best_reward) {
      best_reward = r;
      best = pi;
    }
  }
  return best;
}

}  // namespace asel::dgp
