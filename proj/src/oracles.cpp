#include "mixedvol/oracles.hpp"

#include "mixedvol/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>
#include <thread>

namespace mixedvol::oracles {

std::complex<double> mixed_cf(const MixedModel& m, double u) { return std::exp(m.log_cf({u, 0.0})); }

TiltedFourierInverter mixed_inverter(const MixedModel& m, const FourierOptions& opt) {
    const auto [lo, hi] = m.moment_strip();
    return TiltedFourierInverter([m](std::complex<double> w) { return m.log_cf(w); }, lo, hi, opt);
}

TiltedFourierInverter heston_inverter(const HestonParams& p, const FourierOptions& opt) {
    const auto cm = critical_moments(p);
    return TiltedFourierInverter([p](std::complex<double> w) { return log_cf(p, w); }, cm.s_minus, cm.s_plus, opt);
}

double log_density_fourier(const MixedModel& m, double x, const FourierOptions& opt) {
    if (!(x > 0.0)) throw DomainError("density_fourier: x must be positive");
    const double y = std::log(x);
    return mixed_inverter(m, opt).density(y).log_value - y;
}

double density_fourier(const MixedModel& m, double x, const FourierOptions& opt) {
    return std::exp(log_density_fourier(m, x, opt));
}

double heston_density_fourier(const HestonParams& p, double x, const FourierOptions& opt) {
    if (!(x > 0.0)) throw DomainError("heston_density_fourier: x must be positive");
    const double y = std::log(x);
    return std::exp(heston_inverter(p, opt).density(y).log_value - y);
}

namespace {

// Carr-Madan transform of the damped price e^{alpha k} C(k), k = log K.
// Returns log of the price (call for alpha > 0, put for alpha < -1).
double damped_price_log(const MixedModel& m, double K, double alpha, const CallOptions& opt) {
    const auto [lo, hi] = m.moment_strip();
    const double order = alpha + 1.0;
    if (!(order > lo && order < hi) || (alpha >= -1.0 && alpha <= 0.0)) {
        std::ostringstream os;
        os << "damping " << alpha << " infeasible: need alpha + 1 in (" << lo << ", " << hi
           << ") and alpha outside [-1, 0]";
        throw DomainError(os.str());
    }
    const double k = std::log(K);
    const double M = m.log_moment(order);
    auto psi = [&](double v) {
        const std::complex<double> w(v, -order);
        const std::complex<double> den(alpha * alpha + alpha - v * v, (2.0 * alpha + 1.0) * v);
        return std::exp(m.log_cf(w) - M + std::complex<double>(0.0, -v * k)) / den;
    };
    const double h = opt.step;
    double sum = 0.5 * psi(0.0).real();
    const double ref = std::abs(psi(0.0));
    int quiet = 0;
    long j = 1;
    for (; j < opt.max_terms; ++j) {
        const auto z = psi(j * h);
        sum += z.real();
        if (std::abs(z) < opt.cutoff * ref) {
            if (++quiet >= 50) break;
        } else {
            quiet = 0;
        }
    }
    if (j >= opt.max_terms) throw ConvergenceError("call_fourier: transform did not decay", sum, 0.0);
    const double scaled = sum * h / std::numbers::pi;
    if (!(scaled > 0.0)) {
        std::ostringstream os;
        os << "call_fourier: no relative accuracy left at K=" << K << " (damping " << alpha << ")";
        throw ConvergenceError(os.str(), 0.0, std::abs(scaled));
    }
    return -alpha * k + M + std::log(scaled);
}

double saddle_damping(const MixedModel& m, double K, double a, double b) {
    const double k = std::log(K);
    auto f = [&](double alpha) { return -alpha * k + m.log_moment(alpha + 1.0) - std::log(std::abs(alpha * alpha + alpha)); };
    return numerics::minimize_scalar(f, a, b, 1e-8);
}

}  // namespace

double call_fourier(const MixedModel& m, double K, const CallOptions& opt) {
    if (!(K > 0.0)) throw DomainError("call_fourier: strike must be positive");
    const auto [lo, hi] = m.moment_strip();
    const double top = hi - 1.0;
    if (!(top > 0.0)) throw DomainError("call_fourier: no moment above 1, damping infeasible");
    double alpha;
    if (opt.damping) alpha = *opt.damping;
    else if (opt.saddle) alpha = saddle_damping(m, K, std::min(0.05, 0.1 * top), top - std::min(0.25, 0.1 * top));
    else alpha = 0.5 * top;
    return std::exp(damped_price_log(m, K, alpha, opt));
}

double put_fourier(const MixedModel& m, double K, const CallOptions& opt) {
    if (!(K > 0.0)) throw DomainError("put_fourier: strike must be positive");
    const auto [lo, hi] = m.moment_strip();
    const double bottom = lo - 1.0;  // alpha range (lo - 1, -1)
    double alpha;
    if (opt.damping) alpha = *opt.damping;
    else if (opt.saddle) alpha = saddle_damping(m, K, bottom + std::min(0.25, 0.1 * (-1.0 - bottom)), -1.05);
    else alpha = 0.5 * (bottom - 1.0);
    return std::exp(damped_price_log(m, K, alpha, opt));
}

std::vector<double> simulate_paths(const MixedModel& m, std::uint64_t n_paths, std::uint64_t seed,
                                   const SimulationOptions& opt) {
    if (opt.steps < 1) throw DomainError("simulate_paths: steps must be positive");
    if (opt.chunk == 0) throw DomainError("simulate_paths: chunk must be positive");
    const auto& h = m.heston();
    const double dt = h.t / opt.steps;
    const double sq = std::sqrt(dt);
    const double rho_bar = std::sqrt(1.0 - h.rho * h.rho);
    std::vector<double> out(n_paths);
    const std::uint64_t chunks = (n_paths + opt.chunk - 1) / opt.chunk;
    std::atomic<std::uint64_t> next{0};
    numerics::RngStream root(seed);
    auto worker = [&]() {
        for (std::uint64_t c = next++; c < chunks; c = next++) {
            numerics::RngStream rng = root.substream(c);
            const std::uint64_t begin = c * opt.chunk, end = std::min(n_paths, begin + opt.chunk);
            for (std::uint64_t i = begin; i < end; ++i) {
                double y = h.y0, lx = std::log(h.x0);
                for (int s = 0; s < opt.steps; ++s) {
                    const double yp = std::max(y, 0.0);
                    const double zv = rng.normal();
                    const double zs = h.rho * zv + rho_bar * rng.normal();
                    const double vol = std::sqrt(yp) * sq;
                    lx += (h.mu - 0.5 * yp) * dt + vol * zs;
                    y += (h.a - h.b * yp) * dt + h.c * vol * zv;
                }
                double x = std::exp(lx);
                if (m.kind() == JumpKind::Kou) x *= sample_jump_factor(m.kou(), rng);
                else if (m.kind() == JumpKind::NIG) x *= std::exp(sample_nig(m.nig(), rng));
                out[i] = x;
            }
        }
    };
    unsigned threads = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, chunks));
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return out;
}

namespace {

MCResult summarise(const std::vector<double>& v, std::uint64_t seed) {
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (n - 1.0) / n), static_cast<std::uint64_t>(v.size()), seed};
}

}  // namespace

MCResult mc_moment(const std::vector<double>& samples, double s, std::uint64_t seed) {
    if (samples.size() < 2) throw DomainError("mc_moment: need at least two samples");
    std::vector<double> v(samples.size());
    std::transform(samples.begin(), samples.end(), v.begin(), [s](double x) { return std::pow(x, s); });
    return summarise(v, seed);
}

MCResult mc_call(const std::vector<double>& samples, double K, std::uint64_t seed) {
    if (samples.size() < 2) throw DomainError("mc_call: need at least two samples");
    std::vector<double> v(samples.size());
    std::transform(samples.begin(), samples.end(), v.begin(), [K](double x) { return std::max(x - K, 0.0); });
    return summarise(v, seed);
}

MCResult mc_moment(const MixedModel& m, double s, std::uint64_t n_paths, std::uint64_t seed,
                   const SimulationOptions& opt) {
    return mc_moment(simulate_paths(m, n_paths, seed, opt), s, seed);
}

}  // namespace mixedvol::oracles
