#pragma once

#include "udgembed/elf.hpp"
#include "udgembed/errors.hpp"
#include "udgembed/feasibility.hpp"
#include "udgembed/graph.hpp"
#include "udgembed/hardware.hpp"
#include "udgembed/rng.hpp"
#include "udgembed/types.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace udg {

struct DenseLayer {
    int in = 0;
    int out = 0;
    std::vector<double> w; // row-major [out][in]
    std::vector<double> b; // [out]
};

// Trainable part of the Distance Encoder Network: a small dense autoencoder
// over the 2n input coordinates whose final output passes through
// F_a(t) = L * tanh(t), so emitted coordinates always lie inside (-L, L).
struct DenModel {
    std::vector<DenseLayer> layers;
    double coord_bound = 0.0; // L
    int n = 0;
};

// The fixed +-1 / 0-1 maps behind the trainable stack. DiffL turns 2n
// coordinates into all pairwise x-differences followed by all pairwise
// y-differences; after the square activation, DistL combines them into C(n,2)
// squared pair distances followed by C(n,2) squared row distances. Neither
// map is ever updated during training; forward/backward apply them
// structurally via the pair table.
struct FixedLayers {
    int n = 0;
    std::vector<std::pair<int, int>> pairs; // canonical order

    int pair_count() const { return static_cast<int>(pairs.size()); }

    // DiffL weight at (row, col): rows < C(n,2) are x-differences, the rest
    // y-differences; columns index the CoordL output (x_0..x_{n-1}, y_0..).
    int diff_weight(int row, int col) const {
        const int m = pair_count();
        const auto [i, j] = pairs[static_cast<std::size_t>(row % m)];
        const int offset = row < m ? 0 : n;
        if (col == offset + i) return 1;
        if (col == offset + j) return -1;
        return 0;
    }

    // DistL weight at (row, col) over the squared DiffL outputs.
    int dist_weight(int row, int col) const {
        const int m = pair_count();
        if (row < m) return (col == row || col == m + row) ? 1 : 0;
        return col == row ? 1 : 0;
    }
};

inline FixedLayers make_fixed_layers(int n) {
    if (n < 2) throw DegenerateInstanceError("fixed layers need at least two vertices");
    return FixedLayers{n, canonical_pairs(n)};
}

namespace detail {

inline double atanh_clamped(double ratio) {
    const double r = std::clamp(ratio, -0.999, 0.999);
    return std::atanh(r);
}

// Reusable buffers for one forward/backward sweep.
struct DenWorkspace {
    std::vector<std::vector<double>> acts; // acts[0] = scaled input, acts[l+1] = layer l output
    std::vector<std::vector<double>> zs;   // pre-activations per layer
    std::vector<double> coords;            // 2n, micrometers
    std::vector<double> dx, dy;            // per pair
    std::vector<double> dist;              // 2*C(n,2)
    std::vector<double> dist_grad;
    std::vector<double> coord_grad;
    std::vector<std::vector<double>> delta; // backprop buffers per layer output

    void resize(const DenModel& model, int pair_count) {
        const std::size_t layers = model.layers.size();
        acts.resize(layers + 1);
        zs.resize(layers);
        delta.resize(layers);
        acts[0].resize(static_cast<std::size_t>(2 * model.n));
        for (std::size_t l = 0; l < layers; ++l) {
            zs[l].resize(static_cast<std::size_t>(model.layers[l].out));
            acts[l + 1].resize(static_cast<std::size_t>(model.layers[l].out));
            delta[l].resize(static_cast<std::size_t>(model.layers[l].out));
        }
        coords.resize(static_cast<std::size_t>(2 * model.n));
        dx.resize(static_cast<std::size_t>(pair_count));
        dy.resize(static_cast<std::size_t>(pair_count));
        dist.resize(static_cast<std::size_t>(2 * pair_count));
        dist_grad.resize(static_cast<std::size_t>(2 * pair_count));
        coord_grad.resize(static_cast<std::size_t>(2 * model.n));
    }
};

inline void dense_forward(const DenseLayer& layer, const std::vector<double>& in, std::vector<double>& z) {
    for (int o = 0; o < layer.out; ++o) {
        double acc = layer.b[static_cast<std::size_t>(o)];
        const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
        for (int i = 0; i < layer.in; ++i) acc += row[i] * in[static_cast<std::size_t>(i)];
        z[static_cast<std::size_t>(o)] = acc;
    }
}

// Forward sweep through the full model; fills the workspace with every
// intermediate needed for backprop.
inline void den_forward(const DenModel& model, const FixedLayers& fixed, const Embedding& input,
                        DenWorkspace& ws) {
    const int n = model.n;
    const double bound = model.coord_bound;
    ws.resize(model, fixed.pair_count());

    // Inputs are scaled by 1/L so the dense stack sees O(1) features.
    for (int i = 0; i < n; ++i) {
        ws.acts[0][static_cast<std::size_t>(i)] = input[static_cast<std::size_t>(i)].x / bound;
        ws.acts[0][static_cast<std::size_t>(n + i)] = input[static_cast<std::size_t>(i)].y / bound;
    }

    const std::size_t last = model.layers.size() - 1;
    for (std::size_t l = 0; l <= last; ++l) {
        dense_forward(model.layers[l], ws.acts[l], ws.zs[l]);
        for (std::size_t o = 0; o < ws.zs[l].size(); ++o) {
            ws.acts[l + 1][o] = std::tanh(ws.zs[l][o]);
        }
    }
    // tanh can round to exactly +-1; keep coordinates strictly inside (-L, L)
    const double lim = std::nextafter(bound, 0.0);
    for (std::size_t c = 0; c < ws.coords.size(); ++c) {
        ws.coords[c] = std::clamp(bound * ws.acts[last + 1][c], -lim, lim);
    }

    const int m = fixed.pair_count();
    for (int k = 0; k < m; ++k) {
        const auto [i, j] = fixed.pairs[static_cast<std::size_t>(k)];
        const double ddx = ws.coords[static_cast<std::size_t>(i)] - ws.coords[static_cast<std::size_t>(j)];
        const double ddy =
            ws.coords[static_cast<std::size_t>(n + i)] - ws.coords[static_cast<std::size_t>(n + j)];
        ws.dx[static_cast<std::size_t>(k)] = ddx;
        ws.dy[static_cast<std::size_t>(k)] = ddy;
        ws.dist[static_cast<std::size_t>(k)] = ddx * ddx + ddy * ddy;
        ws.dist[static_cast<std::size_t>(m + k)] = ddy * ddy;
    }
}

// Reverse sweep: dist-layer gradient back to every trainable weight/bias.
// The fixed layers receive none. `grads` must be shaped like model.layers.
inline void den_backward(const DenModel& model, const FixedLayers& fixed, DenWorkspace& ws,
                         std::vector<DenseLayer>& grads) {
    const int n = model.n;
    const int m = fixed.pair_count();
    const double bound = model.coord_bound;

    std::fill(ws.coord_grad.begin(), ws.coord_grad.end(), 0.0);
    for (int k = 0; k < m; ++k) {
        const auto [i, j] = fixed.pairs[static_cast<std::size_t>(k)];
        const double gp = ws.dist_grad[static_cast<std::size_t>(k)];
        const double gs = ws.dist_grad[static_cast<std::size_t>(m + k)];
        const double gdx = 2.0 * ws.dx[static_cast<std::size_t>(k)] * gp;
        const double gdy = 2.0 * ws.dy[static_cast<std::size_t>(k)] * (gp + gs);
        ws.coord_grad[static_cast<std::size_t>(i)] += gdx;
        ws.coord_grad[static_cast<std::size_t>(j)] -= gdx;
        ws.coord_grad[static_cast<std::size_t>(n + i)] += gdy;
        ws.coord_grad[static_cast<std::size_t>(n + j)] -= gdy;
    }

    const std::size_t last = model.layers.size() - 1;
    for (std::size_t o = 0; o < ws.delta[last].size(); ++o) {
        const double t = ws.acts[last + 1][o];
        ws.delta[last][o] = ws.coord_grad[o] * bound * (1.0 - t * t);
    }

    for (std::size_t l = last;; --l) {
        const DenseLayer& layer = model.layers[l];
        DenseLayer& grad = grads[l];
        const std::vector<double>& in = ws.acts[l];
        const std::vector<double>& dz = ws.delta[l];
        for (int o = 0; o < layer.out; ++o) {
            const double g = dz[static_cast<std::size_t>(o)];
            double* grow = grad.w.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) grow[i] = g * in[static_cast<std::size_t>(i)];
            grad.b[static_cast<std::size_t>(o)] = g;
        }
        if (l == 0) break;
        std::vector<double>& prev = ws.delta[l - 1];
        std::fill(prev.begin(), prev.end(), 0.0);
        for (int o = 0; o < layer.out; ++o) {
            const double g = dz[static_cast<std::size_t>(o)];
            const double* row = layer.w.data() + static_cast<std::size_t>(o) * layer.in;
            for (int i = 0; i < layer.in; ++i) prev[static_cast<std::size_t>(i)] += row[i] * g;
        }
        for (std::size_t i = 0; i < prev.size(); ++i) {
            const double a = ws.acts[l][i];
            prev[i] *= 1.0 - a * a;
        }
    }
}

inline std::vector<DenseLayer> zero_like(const DenModel& model) {
    std::vector<DenseLayer> grads;
    grads.reserve(model.layers.size());
    for (const DenseLayer& l : model.layers) {
        grads.push_back(DenseLayer{l.in, l.out, std::vector<double>(l.w.size(), 0.0),
                                   std::vector<double>(l.b.size(), 0.0)});
    }
    return grads;
}

// AdamW with decoupled weight decay; biases are not decayed.
struct AdamW {
    double lr = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
    double weight_decay = 1e-4;
    long step_count = 0;
    std::vector<DenseLayer> m, v;

    AdamW(const DenModel& model, double lr_, double beta1_, double beta2_, double weight_decay_)
        : lr(lr_), beta1(beta1_), beta2(beta2_), weight_decay(weight_decay_), m(zero_like(model)),
          v(zero_like(model)) {}

    void step(DenModel& model, const std::vector<DenseLayer>& grads) {
        ++step_count;
        const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(step_count));
        const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(step_count));
        for (std::size_t l = 0; l < model.layers.size(); ++l) {
            update(model.layers[l].w, grads[l].w, m[l].w, v[l].w, bc1, bc2, weight_decay);
            update(model.layers[l].b, grads[l].b, m[l].b, v[l].b, bc1, bc2, 0.0);
        }
    }

private:
    void update(std::vector<double>& p, const std::vector<double>& g, std::vector<double>& m1,
                std::vector<double>& m2, double bc1, double bc2, double wd) {
        for (std::size_t i = 0; i < p.size(); ++i) {
            m1[i] = beta1 * m1[i] + (1.0 - beta1) * g[i];
            m2[i] = beta2 * m2[i] + (1.0 - beta2) * g[i] * g[i];
            const double mh = m1[i] / bc1;
            const double vh = m2[i] / bc2;
            p[i] -= lr * (mh / (std::sqrt(vh) + eps) + wd * p[i]);
        }
    }
};

} // namespace detail

// Fresh model: 2n -> 4n -> 4n -> 2n dense stack with tanh activations,
// Glorot-uniform weights and zero biases, except the final biases which are
// set to atanh of the (clamped) initial coordinates so the network starts
// near the supplied initial solution.
inline DenModel make_den_model(int n, double coord_bound, const Embedding& initial, std::uint64_t seed) {
    if (n < 2) throw DegenerateInstanceError("DEN model needs at least two vertices");
    if (static_cast<int>(initial.size()) != n)
        throw MalformedInputError("initial solution size does not match vertex count");

    DenModel model;
    model.n = n;
    model.coord_bound = coord_bound;
    const int widths[4] = {2 * n, 4 * n, 4 * n, 2 * n};
    Rng rng = make_rng(seed);
    for (int l = 0; l < 3; ++l) {
        DenseLayer layer;
        layer.in = widths[l];
        layer.out = widths[l + 1];
        const double r = std::sqrt(6.0 / (layer.in + layer.out));
        std::uniform_real_distribution<double> dist(-r, r);
        layer.w.resize(static_cast<std::size_t>(layer.in) * layer.out);
        for (double& w : layer.w) w = dist(rng);
        layer.b.assign(static_cast<std::size_t>(layer.out), 0.0);
        model.layers.push_back(std::move(layer));
    }
    DenseLayer& final_layer = model.layers.back();
    for (int i = 0; i < n; ++i) {
        final_layer.b[static_cast<std::size_t>(i)] =
            detail::atanh_clamped(initial[static_cast<std::size_t>(i)].x / coord_bound);
        final_layer.b[static_cast<std::size_t>(n + i)] =
            detail::atanh_clamped(initial[static_cast<std::size_t>(i)].y / coord_bound);
    }
    return model;
}

struct ForwardResult {
    Embedding coords;             // (-L, L)^2, centered frame
    std::vector<double> dist_out; // 2*C(n,2), DistL layout
};

inline ForwardResult forward(const DenModel& model, const FixedLayers& fixed, const Embedding& input) {
    if (model.n < 2) throw DegenerateInstanceError("forward: no vertex pairs exist");
    if (static_cast<int>(input.size()) != model.n)
        throw MalformedInputError("forward: input size does not match model");
    detail::DenWorkspace ws;
    detail::den_forward(model, fixed, input, ws);
    ForwardResult out;
    out.coords.resize(static_cast<std::size_t>(model.n));
    for (int i = 0; i < model.n; ++i) {
        out.coords[static_cast<std::size_t>(i)] = {ws.coords[static_cast<std::size_t>(i)],
                                                   ws.coords[static_cast<std::size_t>(model.n + i)]};
    }
    out.dist_out = ws.dist;
    return out;
}

struct GradientResult {
    ElfBreakdown loss;
    std::vector<DenseLayer> grads; // shaped like model.layers
};

// Reverse-mode gradients of the total penalty with respect to every trainable
// weight and bias. Fixed layers receive none.
inline GradientResult gradients(const DenModel& model, const FixedLayers& fixed, const Embedding& input,
                                const Graph& g, const ElfConfig& cfg) {
    detail::DenWorkspace ws;
    detail::PairTable table(g);
    detail::den_forward(model, fixed, input, ws);
    GradientResult out;
    out.loss = detail::elf_eval(ws.dist, table, cfg);
    detail::elf_backward(ws.dist, table, cfg, ws.dist_grad);
    out.grads = detail::zero_like(model);
    detail::den_backward(model, fixed, ws, out.grads);
    return out;
}

struct TrainConfig {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double weight_decay = 1e-4;
    int max_iterations = 20000;
    int feasibility_check_period = 100;
    int restarts = 3; // additional reseeded attempts after the first
    std::uint64_t rng_seed = 0;
    double loss_tolerance = 1e-9;
    double wall_clock_budget_s = 0.0; // 0 = unlimited
};

struct TrainReport {
    Embedding final_embedding; // register frame
    double final_loss = 0.0;
    ElfBreakdown component_losses;
    int iterations_used = 0;
    bool feasible = false;
    std::vector<double> loss_trace; // downsampled, winning attempt
    FeasibilityReport final_check;
    int attempts_used = 0;
};

// Initial (typically infeasible) solution fed to the DEN. With a positional
// hint the layout is centered and isotropically rescaled so the mean
// adjacent-pair distance lands at 0.8 * r_b; otherwise vertices are placed on
// a circle with seeded angular jitter.
inline Embedding initial_solution(const Graph& g, const RegisterProfile& p,
                                  const std::optional<Embedding>& hint, std::uint64_t seed) {
    const int n = g.n();
    if (hint && static_cast<int>(hint->size()) == n) {
        Vec2 centroid{0.0, 0.0};
        for (const Vec2& c : *hint) centroid = centroid + c;
        centroid = (1.0 / n) * centroid;
        Embedding centered;
        centered.reserve(static_cast<std::size_t>(n));
        for (const Vec2& c : *hint) centered.push_back(c - centroid);

        double scale = 1.0;
        if (g.edge_count() > 0) {
            double mean_edge = 0.0;
            for (auto [u, v] : g.edges())
                mean_edge += distance(centered[static_cast<std::size_t>(u)], centered[static_cast<std::size_t>(v)]);
            mean_edge /= g.edge_count();
            if (mean_edge > 1e-12) scale = 0.8 * p.r_b / mean_edge;
        } else {
            double extent = 0.0;
            for (const Vec2& c : centered) extent = std::max({extent, std::abs(c.x), std::abs(c.y)});
            if (extent > 1e-12) scale = 0.8 * p.coord_bound / extent;
        }
        for (Vec2& c : centered) c = scale * c;
        return centered;
    }

    const double radius = std::min(0.8 * p.coord_bound, n * p.d_min / 3.141592653589793);
    Rng rng = make_rng(seed);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    Embedding out;
    out.reserve(static_cast<std::size_t>(n));
    const double step = two_pi / n;
    for (int k = 0; k < n; ++k) {
        const double theta = step * (k + jitter(rng));
        out.push_back({radius * std::cos(theta), radius * std::sin(theta)});
    }
    return out;
}

// AdamW training loop with feasibility-based early stopping. Every
// feasibility_check_period iterations the current coordinates are shifted to
// the register frame and run through the exact checker (with the configured
// strictness margin); training stops as soon as it accepts and every loss
// component is within tolerance. On exhaustion the best-loss iterate across
// all restarts is returned. Deterministic for a fixed seed.
inline TrainReport train(const Graph& g, const Embedding& initial, const RegisterProfile& profile,
                         const TrainConfig& tc = {}, const std::optional<ElfConfig>& elf_override = {}) {
    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    const int n = g.n();
    if (static_cast<int>(initial.size()) != n && n > 1)
        throw MalformedInputError("train: initial solution size does not match graph");

    const ElfConfig cfg = elf_override.value_or(make_elf_config(profile));
    const Vec2 offset = register_frame_offset(profile);

    TrainReport report;
    if (n == 1) {
        report.final_embedding = {offset};
        report.final_check = check(report.final_embedding, g, profile, cfg.margin);
        report.feasible = report.final_check.feasible();
        report.attempts_used = 0;
        return report;
    }

    const PrecheckResult pre = precheck(g, profile);
    if (!pre.passed) {
        throw PrecheckError("train: instance fails necessary embedding conditions");
    }

    const FixedLayers fixed = make_fixed_layers(n);
    const detail::PairTable table(g);
    detail::DenWorkspace ws;

    const int trace_stride = std::max(1, tc.max_iterations / 512);
    const auto elapsed_s = [&] {
        return std::chrono::duration<double>(clock::now() - start).count();
    };
    const auto over_budget = [&] {
        return tc.wall_clock_budget_s > 0.0 && elapsed_s() > tc.wall_clock_budget_s;
    };
    const auto to_frame = [&](const std::vector<double>& flat) {
        Embedding e(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            e[static_cast<std::size_t>(i)] = Vec2{flat[static_cast<std::size_t>(i)],
                                                  flat[static_cast<std::size_t>(n + i)]} +
                                             offset;
        }
        return e;
    };
    const auto accepts = [&](const ElfBreakdown& loss, const FeasibilityReport& chk) {
        return chk.feasible() && loss.elf_min <= tc.loss_tolerance && loss.elf_max <= tc.loss_tolerance &&
               loss.elf_row <= tc.loss_tolerance;
    };

    double best_loss = std::numeric_limits<double>::infinity();
    std::vector<double> best_coords;
    ElfBreakdown best_breakdown;
    std::vector<double> best_trace;
    int best_iterations = 0;
    int attempts_run = 0;
    bool out_of_time = false;

    for (int attempt = 0; attempt <= tc.restarts && !out_of_time; ++attempt) {
        DenModel model = make_den_model(n, profile.coord_bound, initial, derive_seed(tc.rng_seed, static_cast<std::uint64_t>(attempt)));
        detail::AdamW opt(model, tc.learning_rate, tc.beta1, tc.beta2, tc.weight_decay);
        std::vector<DenseLayer> grads = detail::zero_like(model);
        ++attempts_run;

        double attempt_best_loss = std::numeric_limits<double>::infinity();
        std::vector<double> attempt_best_coords;
        ElfBreakdown attempt_best_breakdown;
        std::vector<double> trace;
        int iter = 0;

        for (iter = 1; iter <= tc.max_iterations; ++iter) {
            detail::den_forward(model, fixed, initial, ws);
            const ElfBreakdown loss = detail::elf_eval(ws.dist, table, cfg);
            if ((iter - 1) % trace_stride == 0) trace.push_back(loss.total);
            if (loss.total < attempt_best_loss) {
                attempt_best_loss = loss.total;
                attempt_best_coords = ws.coords;
                attempt_best_breakdown = loss;
            }

            if (iter % tc.feasibility_check_period == 0 || iter == tc.max_iterations ||
                loss.total <= tc.loss_tolerance) {
                const Embedding frame = to_frame(ws.coords);
                const FeasibilityReport chk = check(frame, g, profile, cfg.margin);
                if (accepts(loss, chk)) {
                    report.final_embedding = frame;
                    report.final_loss = loss.total;
                    report.component_losses = loss;
                    report.iterations_used = iter;
                    report.feasible = true;
                    trace.push_back(loss.total);
                    report.loss_trace = std::move(trace);
                    report.final_check = chk;
                    report.attempts_used = attempts_run;
                    return report;
                }
                if (over_budget()) {
                    out_of_time = true;
                    break;
                }
            }

            detail::elf_backward(ws.dist, table, cfg, ws.dist_grad);
            detail::den_backward(model, fixed, ws, grads);
            opt.step(model, grads);
        }

        if (attempt_best_loss < best_loss) {
            best_loss = attempt_best_loss;
            best_coords = std::move(attempt_best_coords);
            best_breakdown = attempt_best_breakdown;
            best_trace = std::move(trace);
            best_iterations = std::min(iter, tc.max_iterations);
        }
    }

    report.final_embedding = to_frame(best_coords);
    report.final_loss = best_loss;
    report.component_losses = best_breakdown;
    report.iterations_used = best_iterations;
    report.loss_trace = std::move(best_trace);
    report.final_check = check(report.final_embedding, g, profile, cfg.margin);
    report.feasible = accepts(best_breakdown, report.final_check);
    report.attempts_used = attempts_run;
    return report;
}

} // namespace udg
