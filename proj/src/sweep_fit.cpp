#include "cosmowave/sweep_fit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <thread>

#include "cosmowave/cone.hpp"
#include "cosmowave/serialize.hpp"

namespace cosmowave {

const char* sweep_source_label(SweepSource s) {
    return s == SweepSource::ode ? "ode" : "pde";
}

const char* fit_transform_label(FitTransform t) {
    return t == FitTransform::loglog ? "loglog" : "log_corrected";
}

namespace {

int resolve_threads(int max_threads, size_t jobs) {
    int limit = max_threads;
    if (limit <= 0) {
        limit = static_cast<int>(std::thread::hardware_concurrency());
        if (const char* env = std::getenv("COSMOWAVE_THREADS")) {
            const int env_cap = std::atoi(env);
            if (env_cap > 0) limit = std::min(limit, env_cap);
        }
    }
    limit = std::max(1, limit);
    return static_cast<int>(std::min<size_t>(limit, jobs));
}

void validate_config(const SweepConfig& cfg) {
    if (const auto* ode = std::get_if<OdeSweepConfig>(&cfg)) {
        if (!(ode->p > 1.0)) throw std::invalid_argument("sweep: p must be > 1");
        if (!(ode->mu >= 0.0)) throw std::invalid_argument("sweep: mu must be >= 0");
        ode->K.validate(ode->t0);
        if (!(ode->horizon > ode->t0)) throw std::invalid_argument("sweep: horizon must exceed t0");
        if (!(ode->threshold > 0.0)) throw std::invalid_argument("sweep: threshold must be > 0");
        if (!(ode->f0 >= 0.0) || !(ode->f1 >= 0.0))
            throw std::invalid_argument("sweep: data shape (f0, f1) must be nonnegative");
        return;
    }
    const auto& pde = std::get<PdeSweepConfig>(cfg);
    ModelParams probe = pde.base;
    probe.validate();
    pde.grid.validate();
    const double cone_end = probe.R + cone_expansion(probe.alpha, pde.horizon);
    if (!(pde.grid.r_max >= cone_end + 8.0 * pde.grid.h()))
        throw std::invalid_argument(
            "sweep: r_max too small, the propagation cone reaches the outer boundary before "
            "the horizon");
}

SweepRecord run_one(const SweepConfig& cfg, double eps, const std::string& digest) {
    SweepRecord rec;
    rec.epsilon = eps;
    rec.config_digest = digest;
    try {
        if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
        if (const auto* ode = std::get_if<OdeSweepConfig>(&cfg)) {
            rec.source = SweepSource::ode;
            const auto traj = integrate_kato(ode->mu, ode->p, ode->K, eps * ode->f0,
                                             eps * ode->f1, ode->t0, ode->threshold,
                                             ode->horizon, ode->tol);
            if (traj.blowup_time)
                rec.lifespan = traj.blowup_time;
            else
                rec.failure = ode_termination_label(traj.terminated_reason);
        } else {
            const auto& pde = std::get<PdeSweepConfig>(cfg);
            rec.source = SweepSource::pde;
            ModelParams prm = pde.base;
            prm.epsilon = eps;
            const auto res = run_to_blowup(prm, pde.grid, pde.threshold, pde.horizon, pde.options);
            if (res.lifespan_estimate)
                rec.lifespan = res.lifespan_estimate;
            else
                rec.failure = sim_termination_label(res.terminated_reason);
        }
    } catch (const std::exception& e) {
        rec.failure = e.what();
    }
    return rec;
}

}  // namespace

std::vector<SweepRecord> sweep(const SweepConfig& config, std::span<const double> eps_list,
                               int max_threads) {
    if (eps_list.empty()) throw std::invalid_argument("sweep: eps_list must be nonempty");
    for (double e : eps_list)
        if (!(e > 0.0)) throw std::invalid_argument("sweep: eps_list entries must be positive");
    validate_config(config);

    const std::string digest = sweep_config_digest(config);
    std::vector<SweepRecord> records(eps_list.size());
    const int threads = resolve_threads(max_threads, eps_list.size());

    if (threads <= 1) {
        for (size_t i = 0; i < eps_list.size(); ++i)
            records[i] = run_one(config, eps_list[i], digest);
        return records;
    }

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const size_t i = next.fetch_add(1);
            if (i >= eps_list.size()) return;
            records[i] = run_one(config, eps_list[i], digest);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return records;
}

namespace {

struct XY {
    std::vector<double> x, y;
};

FitResult ols(const XY& data, double theory, FitTransform transform, const FitOptions& opt) {
    const size_t m = data.x.size();
    double sx = 0, sy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += data.x[i];
        sy += data.y[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < m; ++i) {
        const double dx = data.x[i] - mx, dy = data.y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw std::invalid_argument("fit: epsilon values must not be all equal");

    FitResult fit;
    fit.transform = transform;
    fit.points_used = static_cast<int>(m);
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (size_t i = 0; i < m; ++i) {
        const double resid = data.y[i] - (fit.intercept + fit.slope * data.x[i]);
        ss_res += resid * resid;
    }
    fit.r_squared = (syy > 0.0) ? std::max(0.0, 1.0 - ss_res / syy) : (ss_res == 0.0 ? 1.0 : 0.0);
    fit.theory_slope = theory;
    fit.relative_deviation = std::abs(fit.slope - theory) / std::abs(theory);
    fit.pass = fit.relative_deviation <= opt.slope_tolerance && fit.r_squared >= opt.r2_floor;
    return fit;
}

std::vector<const SweepRecord*> finite_records(std::span<const SweepRecord> records,
                                               const FitOptions& opt) {
    std::vector<const SweepRecord*> out;
    for (const auto& r : records)
        if (r.lifespan) out.push_back(&r);
    if (opt.trim_smallest && !out.empty()) {
        auto it = std::min_element(out.begin(), out.end(), [](const auto* a, const auto* b) {
            return a->epsilon < b->epsilon;
        });
        out.erase(it);
    }
    return out;
}

}  // namespace

FitResult fit_powerlaw(std::span<const SweepRecord> records, double p, const FitOptions& opt) {
    if (!(p > 1.0)) throw std::invalid_argument("fit_powerlaw: p must be > 1");
    const auto finite = finite_records(records, opt);
    if (finite.size() < 4)
        throw std::invalid_argument("fit_powerlaw: needs at least 4 finite lifespans");
    XY data;
    for (const auto* r : finite) {
        data.x.push_back(std::log(r->epsilon));
        data.y.push_back(std::log(*r->lifespan));
    }
    return ols(data, -(p - 1.0) / 2.0, FitTransform::loglog, opt);
}

FitResult fit_log_corrected(std::span<const SweepRecord> records, int n, double p,
                            const FitOptions& opt) {
    if (!(p > 1.0)) throw std::invalid_argument("fit_log_corrected: p must be > 1");
    if (n < 2) throw std::invalid_argument("fit_log_corrected: n must be >= 2");
    const auto finite = finite_records(records, opt);
    XY data;
    std::vector<double> excluded;
    const double e = std::exp(1.0);
    for (const auto* r : finite) {
        const double T = *r->lifespan;
        if (!(T > e)) {
            excluded.push_back(r->epsilon);
            continue;
        }
        data.x.push_back(std::log(r->epsilon));
        data.y.push_back(2.0 * std::log(T) - n * (p - 1.0) * std::log(std::log(T)));
    }
    if (data.x.size() < 4)
        throw std::invalid_argument(
            "fit_log_corrected: fewer than 4 usable records (lifespans must exceed e)");
    auto fit = ols(data, -(p - 1.0), FitTransform::log_corrected, opt);
    fit.excluded_epsilons = std::move(excluded);
    return fit;
}

}  // namespace cosmowave
