// SPDX-License-Identifier: Apache-2.0
//
// forestlink - forest radio channel modelling and sounding toolkit
// Copyright 2026 The forestlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "fitting.hpp"
#include "error.hpp"
#include "rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <thread>

namespace forestlink::fit {

using pathloss::Model;

const char* env_name(Env e) noexcept
{
    switch (e) {
    case Env::larch: return "larch";
    case Env::birch: return "birch";
    case Env::other: return "other";
    }
    return "other";
}

const char* link_name(Link l) noexcept
{
    return l == Link::a2g ? "A2G" : "G2G";
}

std::optional<Env> env_from_name(std::string_view s)
{
    if (s == "larch") return Env::larch;
    if (s == "birch") return Env::birch;
    if (s == "other" || s.empty()) return Env::other;
    return std::nullopt;
}

std::optional<Link> link_from_name(std::string_view s)
{
    if (s == "G2G" || s == "g2g" || s.empty()) return Link::g2g;
    if (s == "A2G" || s == "a2g") return Link::a2g;
    return std::nullopt;
}

std::size_t ModelSpec::n_free() const
{
    return static_cast<std::size_t>(std::count(free.begin(), free.end(), true));
}

void ModelSpec::validate() const
{
    const std::size_t n = pathloss::info(model).param_names.size();
    if (init.size() != n || lower.size() != n || upper.size() != n || free.size() != n)
        fail(ErrorCode::arity, "model spec vectors must match the parameter count");
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(init[i]) || !std::isfinite(lower[i]) || !std::isfinite(upper[i]))
            fail(ErrorCode::domain, "bounds and init must be finite");
        if (free[i] && (lower[i] > upper[i] || init[i] < lower[i] || init[i] > upper[i]))
            fail(ErrorCode::domain, "init must lie within bounds for parameter " +
                                        std::string(pathloss::info(model).param_names[i]));
    }
}

ModelSpec default_spec(Model m, const pathloss::LinkGeometry& base)
{
    ModelSpec s;
    s.model = m;
    s.base = base;
    struct P { double init, lo, hi; bool free; };
    std::vector<P> p;
    switch (m) {
    case Model::fspl: break;
    case Model::ci: p = {{2.0, 0.5, 8.0, true}}; break;
    case Model::itu_h:
    case Model::fspl_h: p = {{30.0, 1.0, 2000.0, true}, {0.1, 0.0, 10.0, true}}; break;
    case Model::sui:
        p = {{4.6, 0.0, 10.0, true}, {0.0075, 0.0, 0.1, false}, {12.6, 0.0, 50.0, false},
             {30.0, 1.0, 200.0, false}, {100.0, 1.0, 1000.0, false}};
        break;
    case Model::bhf: p = {{3.0, 0.5, 10.0, true}, {50.0, -100.0, 300.0, true}, {0.0, -200.0, 200.0, true}}; break;
    case Model::bhf_m:
        p = {{3.0, 0.5, 8.0, true},    {0.0, -50.0, 100.0, true}, {1.0, 0.0, 10.0, true},
             {0.0, -100.0, 300.0, s.options.bhf_m == pathloss::BhfMMode::literal},
             {0.0, -100.0, 100.0, true}, {30.0, 1.0, 1000.0, false}};
        break;
    case Model::itu_s:
    case Model::fspl_s:
        p = {{0.3, 0.0, 5.0, true}, {0.3, -1.0, 1.0, true}, {0.3, -1.0, 2.0, true},
             {0.0, -90.0, 90.0, false}, {0.1, -1.0, 1.0, true}};
        break;
    case Model::fe2r: p = {{15.0, 1.01, 100.0, false}}; break;
    case Model::fe2r_m:
        p = {{15.0, 1.01, 100.0, false}, {1.0, 0.3, 3.0, true}, {0.0, -50.0, 50.0, true},
             {0.0, -20.0, 100.0, true}};
        break;
    case Model::hata: p = {{30.0, 1.0, 500.0, false}, {1.8, 0.5, 20.0, false}, {0.0, 0.0, 4.0, false}}; break;
    }
    for (const auto& e : p) {
        s.init.push_back(e.init);
        s.lower.push_back(e.lo);
        s.upper.push_back(e.hi);
        s.free.push_back(e.free);
    }
    return s;
}

double predict(std::span<const double> params, const ModelSpec& spec, const PathLossSample& smp)
{
    auto g = spec.base;
    g.dist_m = smp.dist_m;
    if (smp.elev_deg) {
        const double e = *smp.elev_deg;
        g.elev_rad = e == 90.0 ? std::numbers::pi / 2 : e * std::numbers::pi / 180.0;
    }
    return pathloss::evaluate(spec.model, g, params, spec.options);
}

double rmse(std::span<const double> params, const ModelSpec& spec, std::span<const PathLossSample> samples)
{
    if (samples.empty())
        fail(ErrorCode::arity, "rmse needs at least one sample");
    double acc = 0.0;
    for (const auto& s : samples) {
        const double r = predict(params, spec, s) - s.pl_db;
        acc += r * r;
    }
    return std::sqrt(acc / static_cast<double>(samples.size()));
}

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// Residual vector; false when the model leaves its domain at this point.
bool residuals(const ModelSpec& spec, std::span<const PathLossSample> samples, std::span<const double> params,
               Eigen::VectorXd& r)
{
    r.resize(static_cast<Eigen::Index>(samples.size()));
    try {
        for (std::size_t i = 0; i < samples.size(); ++i) {
            const double v = predict(params, spec, samples[i]) - samples[i].pl_db;
            if (!std::isfinite(v))
                return false;
            r[static_cast<Eigen::Index>(i)] = v;
        }
    } catch (const Error& e) {
        if (e.code() != ErrorCode::domain)
            throw;
        return false;
    }
    return true;
}

}  // namespace

LmResult levenberg_marquardt(const ModelSpec& spec, std::span<const PathLossSample> samples,
                             std::span<const double> start, int max_iter)
{
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < spec.free.size(); ++i)
        if (spec.free[i])
            idx.push_back(i);
    const auto nf = static_cast<Eigen::Index>(idx.size());
    const auto ns = static_cast<Eigen::Index>(samples.size());

    std::vector<double> x(start.begin(), start.end());
    for (auto i : idx)
        x[i] = std::clamp(x[i], spec.lower[i], spec.upper[i]);

    LmResult out;
    Eigen::VectorXd r;
    if (!residuals(spec, samples, x, r)) {
        out.params = x;
        out.cost = inf;
        return out;
    }
    double cost = r.squaredNorm();
    if (nf == 0) {
        out.params = x;
        out.cost = cost;
        out.converged = true;
        return out;
    }

    double lambda = 1e-3;
    Eigen::MatrixXd jac(ns, nf);
    Eigen::VectorXd rp, rm, rn;
    std::vector<double> xt = x;
    for (int it = 1; it <= max_iter; ++it) {
        out.iterations = it;
        if (cost == 0.0) {
            out.converged = true;
            break;
        }
        // central differences, one-sided at the bounds
        for (Eigen::Index j = 0; j < nf; ++j) {
            const auto k = idx[static_cast<std::size_t>(j)];
            const double h = 1e-6 * std::max(std::abs(x[k]), 1.0);
            double hi = std::min(x[k] + h, spec.upper[k]);
            double lo = std::max(x[k] - h, spec.lower[k]);
            xt = x;
            xt[k] = hi;
            bool ok_hi = hi > x[k] && residuals(spec, samples, xt, rp);
            xt[k] = lo;
            bool ok_lo = lo < x[k] && residuals(spec, samples, xt, rm);
            if (ok_hi && ok_lo) {
                jac.col(j) = (rp - rm) / (hi - lo);
            } else if (ok_hi) {
                jac.col(j) = (rp - r) / (hi - x[k]);
            } else if (ok_lo) {
                jac.col(j) = (r - rm) / (x[k] - lo);
            } else {
                jac.col(j).setZero();
            }
        }
        const Eigen::MatrixXd jtj = jac.transpose() * jac;
        const Eigen::VectorXd g = jac.transpose() * r;
        Eigen::VectorXd diag = jtj.diagonal();
        const double dmax = std::max(diag.maxCoeff(), 1e-300);
        for (Eigen::Index j = 0; j < nf; ++j)
            diag[j] = std::max(diag[j], 1e-12 * dmax);

        bool accepted = false;
        bool done = false;
        while (!accepted) {
            Eigen::MatrixXd a = jtj;
            a.diagonal() += lambda * diag;
            const Eigen::VectorXd delta = a.ldlt().solve(-g);
            std::vector<double> xn = x;
            for (Eigen::Index j = 0; j < nf; ++j) {
                const auto k = idx[static_cast<std::size_t>(j)];
                xn[k] = std::clamp(x[k] + delta[j], spec.lower[k], spec.upper[k]);
            }
            double cn = inf;
            if (delta.allFinite() && residuals(spec, samples, xn, rn))
                cn = rn.squaredNorm();
            if (cn < cost) {
                double step = 0.0, norm = 0.0;
                for (auto k : idx) {
                    step += (xn[k] - x[k]) * (xn[k] - x[k]);
                    norm += x[k] * x[k];
                }
                const double rel_cost = (cost - cn) / cost;
                x = std::move(xn);
                r = rn;
                cost = cn;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (std::sqrt(step) < 1e-9 * (std::sqrt(norm) + 1e-9) || rel_cost < 1e-12)
                    done = true;
            } else {
                lambda *= 10.0;
                if (lambda > 1e20) {
                    done = true;  // no descent left at machine precision
                    break;
                }
            }
        }
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.params = x;
    out.cost = cost;
    return out;
}

FittedModel fit_model(std::span<const PathLossSample> samples, const ModelSpec& spec, const FitOptions& opt)
{
    spec.validate();
    const std::size_t nf = spec.n_free();
    if (samples.size() < nf + 1 || samples.empty())
        fail(ErrorCode::arity, "need at least " + std::to_string(nf + 1) + " samples for " +
                                   std::to_string(nf) + " free parameters, got " + std::to_string(samples.size()));
    for (const auto& s : samples)
        if (!(s.dist_m > 0.0) || !std::isfinite(s.pl_db))
            fail(ErrorCode::domain, "samples need positive distance and finite path loss");
    if (nf > 0) {
        std::set<double> distinct;
        for (const auto& s : samples)
            distinct.insert(s.dist_m);
        if (distinct.size() < 2)
            fail(ErrorCode::degenerate, "all samples share one distance; the model is not identifiable");
    }

    // start 0 is the caller's init, then a Latin hypercube over the free bounds
    const int n_lhs = nf == 0 ? 0 : std::max(opt.n_starts, 0);
    std::vector<std::vector<double>> starts(static_cast<std::size_t>(n_lhs) + 1, spec.init);
    if (n_lhs > 0) {
        Rng rng(opt.seed, Stream::multistart);
        for (std::size_t k = 0; k < spec.free.size(); ++k) {
            if (!spec.free[k])
                continue;
            std::vector<int> perm(static_cast<std::size_t>(n_lhs));
            for (int i = 0; i < n_lhs; ++i)
                perm[static_cast<std::size_t>(i)] = i;
            for (int i = n_lhs - 1; i > 0; --i)
                std::swap(perm[static_cast<std::size_t>(i)], perm[rng.below(static_cast<std::uint64_t>(i) + 1)]);
            for (int i = 0; i < n_lhs; ++i) {
                const double u = (perm[static_cast<std::size_t>(i)] + rng.uniform()) / n_lhs;
                starts[static_cast<std::size_t>(i) + 1][k] = spec.lower[k] + u * (spec.upper[k] - spec.lower[k]);
            }
        }
    }

    std::vector<LmResult> results(starts.size());
    unsigned workers = opt.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : opt.threads;
    workers = std::min<unsigned>(workers, static_cast<unsigned>(starts.size()));
    std::atomic<std::size_t> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    auto work = [&] {
        for (std::size_t i = next++; i < starts.size(); i = next++) {
            try {
                results[i] = levenberg_marquardt(spec, samples, starts[i], opt.max_iter);
            } catch (...) {
                std::lock_guard lk(err_mu);
                if (!err)
                    err = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back(work);
    }
    if (err)
        std::rethrow_exception(err);

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        const double a = results[i].cost;
        const double b = results[best].cost;
        if (a < b && !(std::abs(a - b) <= 1e-12 * std::max(std::abs(b), 1e-300)))
            best = i;
    }
    if (!std::isfinite(results[best].cost))
        fail(ErrorCode::domain, "model is undefined at every starting point");

    FittedModel f;
    f.spec = spec;
    f.params = results[best].params;
    f.n_samples = samples.size();
    f.rmse_db = std::sqrt(results[best].cost / static_cast<double>(samples.size()));
    f.converged = results[best].converged;
    f.iterations = results[best].iterations;
    f.best_start = static_cast<int>(best);
    return f;
}

std::vector<double> shadow_residuals(const FittedModel& fitted, std::span<const PathLossSample> samples)
{
    if (!fitted.converged)
        fail(ErrorCode::not_converged, "shadow residuals need a converged fit");
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& s : samples)
        out.push_back(s.pl_db - predict(fitted.params, fitted.spec, s));
    return out;
}

namespace {

double quantile_sorted(const std::vector<double>& v, double q)
{
    const double pos = q * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

NormalFit fit_normal(std::span<const double> series)
{
    if (series.size() < 2)
        fail(ErrorCode::arity, "normal fit needs at least two values");
    for (double x : series)
        if (!std::isfinite(x))
            fail(ErrorCode::domain, "series contains a non-finite value");
    NormalFit nf;
    nf.n = series.size();
    const double n = static_cast<double>(series.size());
    double mean = 0.0;
    for (double x : series)
        mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : series)
        ss += (x - mean) * (x - mean);
    nf.mu = mean;
    nf.sigma = std::sqrt(ss / (n - 1.0));
    if (nf.sigma == 0.0) {
        nf.fit_err_defined = false;
        nf.fit_err_pct = 0.0;
        return nf;
    }

    std::vector<double> v(series.begin(), series.end());
    std::sort(v.begin(), v.end());
    const double iqr = quantile_sorted(v, 0.75) - quantile_sorted(v, 0.25);
    double width = iqr > 0.0 ? 2.0 * iqr / std::cbrt(n) : 3.49 * nf.sigma / std::cbrt(n);
    const double lo = v.front();
    const double span = v.back() - lo;
    std::size_t bins = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(span / width)));
    bins = std::min<std::size_t>(bins, 100000);
    width = span > 0.0 ? span / static_cast<double>(bins) : width;
    std::vector<double> counts(bins, 0.0);
    for (double x : v) {
        auto b = span > 0.0 ? static_cast<std::size_t>((x - lo) / width) : 0;
        counts[std::min(b, bins - 1)] += 1.0;
    }
    const double norm = 1.0 / (nf.sigma * std::sqrt(2.0 * std::numbers::pi));
    double acc = 0.0;
    for (std::size_t b = 0; b < bins; ++b) {
        const double centre = lo + (static_cast<double>(b) + 0.5) * width;
        const double z = (centre - nf.mu) / nf.sigma;
        const double pdf = norm * std::exp(-0.5 * z * z);
        const double dens = counts[b] / (n * width);
        acc += (dens - pdf) * (dens - pdf);
    }
    nf.bins = bins;
    nf.fit_err_pct = 100.0 * std::sqrt(acc / static_cast<double>(bins));
    return nf;
}

std::vector<PathLossSample> simulate_samples(const ModelSpec& spec, std::span<const double> params, double d_min,
                                             double d_max, std::size_t n, double sigma_db, std::uint64_t seed)
{
    if (!(d_min > 0.0) || !(d_max >= d_min))
        fail(ErrorCode::domain, "distance range must be positive and ordered");
    if (!(sigma_db >= 0.0))
        fail(ErrorCode::domain, "shadowing sigma must be non-negative");
    Rng dist_rng(seed, Stream::profile);
    Rng shadow_rng(seed, Stream::shadowing);
    std::vector<PathLossSample> out;
    out.reserve(n);
    const double elev = spec.base.elev_deg();
    for (std::size_t i = 0; i < n; ++i) {
        PathLossSample s;
        s.dist_m = dist_rng.uniform(d_min, d_max);
        if (spec.model == pathloss::Model::itu_s || spec.model == pathloss::Model::fspl_s ||
            spec.model == pathloss::Model::fe2r || spec.model == pathloss::Model::fe2r_m) {
            s.elev_deg = elev;
            s.link = Link::a2g;
        }
        s.pl_db = predict(params, spec, s) + sigma_db * shadow_rng.normal();
        out.push_back(s);
    }
    return out;
}

}  // namespace forestlink::fit
