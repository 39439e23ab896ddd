#include "sparsefilt/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

namespace sparsefilt {

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::NLMS: return "nlms";
        case Algorithm::PNLMS: return "pnlms";
        case Algorithm::ZA_PNLMS: return "za_pnlms";
        case Algorithm::RZA_PNLMS: return "rza_pnlms";
    }
    throw std::logic_error("algorithm_name: bad enum value");
}

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "nlms") return Algorithm::NLMS;
    if (name == "pnlms") return Algorithm::PNLMS;
    if (name == "za_pnlms") return Algorithm::ZA_PNLMS;
    if (name == "rza_pnlms") return Algorithm::RZA_PNLMS;
    throw std::invalid_argument("unknown algorithm: " + name);
}

void FilterConfig::validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("FilterConfig: mu must be > 0");
    if (!(delta_p >= 0.0)) throw std::invalid_argument("FilterConfig: delta_p must be >= 0");
    if (!(rho >= 0.0)) throw std::invalid_argument("FilterConfig: rho must be >= 0");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("FilterConfig: epsilon must be >= 0");
    if (algorithm != Algorithm::NLMS) gain_params.validate();
}

FilterState FilterState::zeros(int length) {
    FilterState s;
    s.w = WeightVector::Zero(length);
    return s;
}

namespace {

inline double sign_of(double v) { return (v > 0.0) ? 1.0 : (v < 0.0) ? -1.0 : 0.0; }

}  // namespace

namespace detail {

double step_in_place(Eigen::VectorXd& w, const double* x, double d, const FilterConfig& cfg,
                     StepWorkspace& ws, double* max_abs_w) {
    const int L = static_cast<int>(w.size());

    double y = 0.0;
    for (int i = 0; i < L; ++i) y += w[i] * x[i];
    const double e = d - y;
    const double coef = cfg.mu * e;

    double max_abs = 0.0;
    if (cfg.algorithm == Algorithm::NLMS) {
        double energy = 0.0;
        for (int i = 0; i < L; ++i) energy += x[i] * x[i];
        const double denom = energy + cfg.delta_p;
        for (int i = 0; i < L; ++i) {
            w[i] += coef * x[i] / denom;
            max_abs = std::max(max_abs, std::abs(w[i]));
        }
    } else {
        if (cfg.force_uniform_gain) {
            ws.gain.setConstant(L, 1.0 / static_cast<double>(L));
        } else {
            const double max_mag = w.cwiseAbs().maxCoeff();
            const double floor = cfg.gain_params.rho_g * std::max(cfg.gain_params.delta, max_mag);
            double total = 0.0;
            ws.gain.resize(L);
            for (int i = 0; i < L; ++i) {
                ws.gain[i] = std::max(floor, std::abs(w[i]));
                total += ws.gain[i];
            }
            ws.gain /= total;
        }
        ws.scaled_x.resize(L);
        double energy = 0.0;
        for (int i = 0; i < L; ++i) {
            ws.scaled_x[i] = ws.gain[i] * x[i];
            energy += x[i] * ws.scaled_x[i];
        }
        const double denom = energy + cfg.delta_p;

        const bool za = cfg.algorithm == Algorithm::ZA_PNLMS;
        const bool rza = cfg.algorithm == Algorithm::RZA_PNLMS;
        for (int i = 0; i < L; ++i) {
            const double pre = w[i];
            const double t = pre + coef * ws.scaled_x[i] / denom;
            double next = t;
            if (za || rza) {
                double attractor = cfg.rho * sign_of(pre);
                if (rza) attractor /= 1.0 + cfg.epsilon * std::abs(pre);
                if (cfg.clamp_attractor && attractor != 0.0 && sign_of(t) == sign_of(attractor) &&
                    std::abs(t) <= std::abs(attractor))
                    next = 0.0;
                else
                    next = t - attractor;
            }
            w[i] = next;
            max_abs = std::max(max_abs, std::abs(next));
        }
    }
    if (max_abs_w) *max_abs_w = max_abs;
    return e;
}

}  // namespace detail

namespace {

FilterState checked_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                         const FilterConfig& cfg, Algorithm expected) {
    if (cfg.algorithm != expected)
        throw std::invalid_argument("filter step: config selects a different algorithm");
    cfg.validate();
    if (x.size() != s.w.size())
        throw std::invalid_argument("filter step: regressor length does not match weights");
    if (!x.allFinite() || !std::isfinite(d))
        throw std::invalid_argument("filter step: non-finite input sample");
    FilterState next;
    next.w = s.w;
    detail::StepWorkspace ws;
    next.last_error = detail::step_in_place(next.w, x.data(), d, cfg, ws, nullptr);
    next.n = s.n + 1;
    return next;
}

}  // namespace

FilterState nlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                      const FilterConfig& cfg) {
    return checked_step(s, x, d, cfg, Algorithm::NLMS);
}

FilterState pnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                       const FilterConfig& cfg) {
    return checked_step(s, x, d, cfg, Algorithm::PNLMS);
}

FilterState zapnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                         const FilterConfig& cfg) {
    return checked_step(s, x, d, cfg, Algorithm::ZA_PNLMS);
}

FilterState rzapnlms_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                          const FilterConfig& cfg) {
    return checked_step(s, x, d, cfg, Algorithm::RZA_PNLMS);
}

FilterState filter_step(const FilterState& s, const Eigen::VectorXd& x, double d,
                        const FilterConfig& cfg) {
    return checked_step(s, x, d, cfg, cfg.algorithm);
}

RunRecord run_filter(const FilterConfig& cfg, int length, const SignalBuffer& input,
                     const SignalBuffer& desired, const RecordPolicy& record) {
    cfg.validate();
    if (length < 1) throw std::invalid_argument("run_filter: length must be >= 1");
    if (input.size() != desired.size())
        throw std::invalid_argument("run_filter: input and desired lengths differ");
    if (record.stride < 0) throw std::invalid_argument("run_filter: stride must be >= 0");

    const long n_samples = input.size();
    std::vector<long> iters{0};
    if (record.stride >= 1)
        for (long k = record.stride; k <= n_samples; k += record.stride) iters.push_back(k);
    if (iters.back() != n_samples && n_samples > 0) iters.push_back(n_samples);

    RunRecord rec;
    rec.snapshot_iters.reserve(iters.size());
    rec.snapshots.resize(static_cast<long>(iters.size()), length);
    rec.errors.resize(n_samples);

    Eigen::VectorXd w = WeightVector::Zero(length);
    Eigen::VectorXd regressor = Eigen::VectorXd::Zero(length);
    detail::StepWorkspace ws;

    std::size_t next_snapshot = 0;
    auto take_snapshot = [&](long iter) {
        rec.snapshots.row(static_cast<long>(next_snapshot)) = w;
        rec.snapshot_iters.push_back(iter);
        ++next_snapshot;
    };
    take_snapshot(0);

    long done = 0;
    for (long n = 0; n < n_samples; ++n) {
        if (length > 1)
            std::memmove(regressor.data() + 1, regressor.data(),
                         sizeof(double) * static_cast<std::size_t>(length - 1));
        regressor[0] = input.samples[n];

        double max_abs = 0.0;
        const double e =
            detail::step_in_place(w, regressor.data(), desired.samples[n], cfg, ws, &max_abs);
        rec.errors[n] = e;
        done = n + 1;

        if (!std::isfinite(e) || !std::isfinite(max_abs) || max_abs > kDivergenceLimit) {
            rec.diverged = true;
            rec.diverged_at = n;
            break;
        }
        if (next_snapshot < iters.size() && iters[next_snapshot] == done) take_snapshot(done);
    }

    if (rec.diverged) {
        rec.errors.conservativeResize(done);
        rec.snapshots.conservativeResize(static_cast<long>(next_snapshot), length);
    }
    rec.final_state.w = std::move(w);
    rec.final_state.n = done;
    rec.final_state.last_error = done > 0 ? rec.errors[done - 1] : 0.0;
    return rec;
}

}  // namespace sparsefilt
