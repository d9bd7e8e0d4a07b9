#include "lopf/simplex.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <vector>

namespace lopf {

std::string_view to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::optimal: return "optimal";
        case SolveStatus::infeasible: return "infeasible";
        case SolveStatus::unbounded: return "unbounded";
        case SolveStatus::iteration_limit: return "iteration-limit";
    }
    return "?";
}

namespace {

constexpr double kZeroTol = 1e-11;
constexpr double kPivotTol = 1e-8;
constexpr int kRefactorInterval = 100;
constexpr int kStallLimit = 50;

enum State : uint8_t { AtLower, AtUpper, Basic, FreeAtZero };

struct Eta {
    int pivot_row;
    std::vector<std::pair<int, double>> entries;  // sparse FTRAN vector w
    double pivot_value;
};

struct Workspace {
    // columns of [A | -I], CSC
    int m = 0, n = 0;  // rows, structural columns; total columns n + m
    std::vector<int> col_start, row_idx;
    std::vector<double> val;
    std::vector<double> lo, up, cost;  // per column
    std::vector<double> xval;
    std::vector<uint8_t> state;
    std::vector<int> basis;      // variable index per row position
    std::vector<int> basic_pos;  // column -> row position, -1 if nonbasic

    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    std::vector<Eta> etas;

    int total() const { return n + m; }

    void column_axpy(int j, double alpha, Eigen::VectorXd& out) const {
        for (int k = col_start[j]; k < col_start[j + 1]; ++k)
            out[row_idx[k]] += alpha * val[k];
    }
    double column_dot(int j, const Eigen::VectorXd& y) const {
        double s = 0;
        for (int k = col_start[j]; k < col_start[j + 1]; ++k)
            s += val[k] * y[row_idx[k]];
        return s;
    }
};

bool factorize(Workspace& w) {
    std::vector<Eigen::Triplet<double>> trips;
    for (int p = 0; p < w.m; ++p) {
        int j = w.basis[p];
        for (int k = w.col_start[j]; k < w.col_start[j + 1]; ++k)
            trips.emplace_back(w.row_idx[k], p, w.val[k]);
    }
    Eigen::SparseMatrix<double> B(w.m, w.m);
    B.setFromTriplets(trips.begin(), trips.end());
    w.lu.compute(B);
    w.etas.clear();
    return w.lu.info() == Eigen::Success;
}

void recompute_basics(Workspace& w) {
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(w.m);
    for (int j = 0; j < w.total(); ++j) {
        if (w.state[j] == Basic || w.xval[j] == 0.0) continue;
        w.column_axpy(j, -w.xval[j], rhs);
    }
    Eigen::VectorXd xb = w.lu.solve(rhs);
    for (int p = 0; p < w.m; ++p) w.xval[w.basis[p]] = xb[p];
}

void ftran(const Workspace& w, Eigen::VectorXd& v) {
    v = w.lu.solve(v);
    for (const auto& e : w.etas) {
        double piv = v[e.pivot_row] / e.pivot_value;
        if (piv != 0.0) {
            for (const auto& [i, h] : e.entries)
                if (i != e.pivot_row) v[i] -= h * piv;
        }
        v[e.pivot_row] = piv;
    }
}

void btran(Workspace& w, Eigen::VectorXd& u) {
    for (auto it = w.etas.rbegin(); it != w.etas.rend(); ++it) {
        double s = u[it->pivot_row];
        for (const auto& [i, h] : it->entries)
            if (i != it->pivot_row) s -= h * u[i];
        u[it->pivot_row] = s / it->pivot_value;
    }
    u = w.lu.transpose().solve(u);
}

// Bound-only problem (no constraints): each variable goes to the bound
// favored by its cost.
SolveResult solve_unconstrained(const LpProblem& lp, SolveResult res) {
    res.status = SolveStatus::optimal;
    res.objective = 0;
    for (const auto& v : lp.variables) {
        double x;
        if (v.objective > 0)
            x = v.lower;
        else if (v.objective < 0)
            x = v.upper;
        else
            x = std::isfinite(v.lower) ? v.lower : (std::isfinite(v.upper) ? v.upper : 0.0);
        if (!std::isfinite(x)) {
            res.status = SolveStatus::unbounded;
            res.values.clear();
            return res;
        }
        res.values[v.name] = x;
        res.objective += v.objective * x;
    }
    return res;
}

}  // namespace

SolveResult solve(const LpProblem& lp, const SolveOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    SolveResult res;
    auto finish = [&](SolveStatus st) {
        res.status = st;
        res.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return res;
    };

    if (lp.constraints.empty()) {
        res = solve_unconstrained(lp, res);
        return finish(res.status);
    }

    Workspace w;
    w.m = static_cast<int>(lp.constraints.size());
    w.n = static_cast<int>(lp.variables.size());
    const int ncols = w.total();

    // structural columns
    w.col_start.reserve(static_cast<std::size_t>(ncols) + 1);
    w.col_start.push_back(0);
    {
        // gather per-variable entries
        std::vector<std::vector<std::pair<int, double>>> cols(
            static_cast<std::size_t>(w.n));
        for (int i = 0; i < w.m; ++i)
            for (const auto& [j, a] : lp.constraints[static_cast<std::size_t>(i)].coeffs)
                if (a != 0.0) cols[static_cast<std::size_t>(j)].emplace_back(i, a);
        for (int j = 0; j < w.n; ++j) {
            for (const auto& [i, a] : cols[static_cast<std::size_t>(j)]) {
                w.row_idx.push_back(i);
                w.val.push_back(a);
            }
            w.col_start.push_back(static_cast<int>(w.row_idx.size()));
        }
    }
    // logical columns: -1 at the row
    for (int i = 0; i < w.m; ++i) {
        w.row_idx.push_back(i);
        w.val.push_back(-1.0);
        w.col_start.push_back(static_cast<int>(w.row_idx.size()));
    }

    w.lo.resize(static_cast<std::size_t>(ncols));
    w.up.resize(static_cast<std::size_t>(ncols));
    w.cost.assign(static_cast<std::size_t>(ncols), 0.0);
    double cost_scale = 1.0;
    for (int j = 0; j < w.n; ++j) {
        const auto& v = lp.variables[static_cast<std::size_t>(j)];
        w.lo[static_cast<std::size_t>(j)] = v.lower;
        w.up[static_cast<std::size_t>(j)] = v.upper;
        w.cost[static_cast<std::size_t>(j)] = v.objective;
        cost_scale = std::max(cost_scale, std::abs(v.objective));
    }
    for (int i = 0; i < w.m; ++i) {
        const auto& c = lp.constraints[static_cast<std::size_t>(i)];
        double L, U;
        switch (c.rel) {
            case Relation::le: L = -kInf; U = c.rhs; break;
            case Relation::ge: L = c.rhs; U = kInf; break;
            default: L = U = c.rhs; break;
        }
        w.lo[static_cast<std::size_t>(w.n + i)] = L;
        w.up[static_cast<std::size_t>(w.n + i)] = U;
    }

    // start: logicals basic, structurals at a finite bound (or 0 if free)
    w.xval.assign(static_cast<std::size_t>(ncols), 0.0);
    w.state.assign(static_cast<std::size_t>(ncols), AtLower);
    w.basis.resize(static_cast<std::size_t>(w.m));
    w.basic_pos.assign(static_cast<std::size_t>(ncols), -1);
    for (int j = 0; j < w.n; ++j) {
        auto sj = static_cast<std::size_t>(j);
        if (std::isfinite(w.lo[sj])) {
            w.state[sj] = AtLower;
            w.xval[sj] = w.lo[sj];
        } else if (std::isfinite(w.up[sj])) {
            w.state[sj] = AtUpper;
            w.xval[sj] = w.up[sj];
        } else {
            w.state[sj] = FreeAtZero;
            w.xval[sj] = 0.0;
        }
    }
    for (int i = 0; i < w.m; ++i) {
        int j = w.n + i;
        w.basis[static_cast<std::size_t>(i)] = j;
        w.basic_pos[static_cast<std::size_t>(j)] = i;
        w.state[static_cast<std::size_t>(j)] = Basic;
    }

    const double ftol = opt.feasibility_tol;
    const double dtol = opt.optimality_tol * cost_scale;
    const long max_iter =
        opt.max_iterations > 0 ? opt.max_iterations
                               : 20000L + 200L * static_cast<long>(w.m + w.n);

    auto bound_tol = [&](double b) { return ftol * (1.0 + std::abs(b)); };

    if (!factorize(w)) return finish(SolveStatus::infeasible);  // cannot happen: B = -I
    recompute_basics(w);

    Eigen::VectorXd y(w.m), wcol(w.m), cb(w.m);
    std::vector<double> phase_cost(static_cast<std::size_t>(ncols), 0.0);

    long iter = 0;
    int since_refactor = 0;
    int stalled = 0;
    bool bland = false;
    double last_obj = kInf;
    bool last_phase1 = true;

    while (true) {
        if (iter >= max_iter) return finish(SolveStatus::iteration_limit);
        ++iter;
        res.iterations = iter;

        if (since_refactor >= kRefactorInterval) {
            if (!factorize(w)) {
                // numerical breakdown: restart from the logical basis
                for (int j = 0; j < w.total(); ++j) {
                    auto sj = static_cast<std::size_t>(j);
                    if (w.state[sj] != Basic) continue;
                    if (std::isfinite(w.lo[sj])) {
                        w.state[sj] = AtLower;
                        w.xval[sj] = w.lo[sj];
                    } else if (std::isfinite(w.up[sj])) {
                        w.state[sj] = AtUpper;
                        w.xval[sj] = w.up[sj];
                    } else {
                        w.state[sj] = FreeAtZero;
                        w.xval[sj] = 0.0;
                    }
                    w.basic_pos[sj] = -1;
                }
                for (int i = 0; i < w.m; ++i) {
                    int j = w.n + i;
                    w.basis[static_cast<std::size_t>(i)] = j;
                    w.basic_pos[static_cast<std::size_t>(j)] = i;
                    w.state[static_cast<std::size_t>(j)] = Basic;
                }
                factorize(w);
            }
            recompute_basics(w);
            since_refactor = 0;
        }

        // phase detection and phase cost on basics
        bool phase1 = false;
        double infeas_sum = 0;
        for (int p = 0; p < w.m; ++p) {
            int b = w.basis[static_cast<std::size_t>(p)];
            auto sb = static_cast<std::size_t>(b);
            double x = w.xval[sb];
            double tl = bound_tol(w.lo[sb]), tu = bound_tol(w.up[sb]);
            if (x < w.lo[sb] - tl) {
                phase1 = true;
                infeas_sum += w.lo[sb] - x;
            } else if (x > w.up[sb] + tu) {
                phase1 = true;
                infeas_sum += x - w.up[sb];
            }
        }

        for (int p = 0; p < w.m; ++p) {
            int b = w.basis[static_cast<std::size_t>(p)];
            auto sb = static_cast<std::size_t>(b);
            double x = w.xval[sb];
            double pc;
            if (phase1) {
                if (x < w.lo[sb] - bound_tol(w.lo[sb]))
                    pc = -1.0;
                else if (x > w.up[sb] + bound_tol(w.up[sb]))
                    pc = 1.0;
                else
                    pc = 0.0;
            } else {
                pc = w.cost[sb];
            }
            cb[p] = pc;
        }

        // stall tracking
        double obj_now;
        if (phase1) {
            obj_now = infeas_sum;
        } else {
            obj_now = 0;
            for (int j = 0; j < w.n; ++j)
                obj_now += w.cost[static_cast<std::size_t>(j)] *
                           w.xval[static_cast<std::size_t>(j)];
        }
        if (phase1 == last_phase1 && obj_now > last_obj - 1e-12 * (1.0 + std::abs(last_obj))) {
            if (++stalled >= kStallLimit) bland = true;
        } else {
            stalled = 0;
            bland = false;
        }
        last_obj = obj_now;
        last_phase1 = phase1;

        y = cb;
        btran(w, y);

        // pricing
        int entering = -1;
        int dir = 0;
        const double price_tol = phase1 ? std::max(opt.optimality_tol, 1e-9) : dtol;
        double best = price_tol;
        double d_best = 0;
        for (int j = 0; j < w.total(); ++j) {
            auto sj = static_cast<std::size_t>(j);
            if (w.state[sj] == Basic) continue;
            if (w.lo[sj] == w.up[sj]) continue;  // fixed
            double cj = phase1 ? 0.0 : w.cost[sj];
            double d = cj - w.column_dot(j, y);
            int cand_dir = 0;
            if (w.state[sj] == AtLower || w.state[sj] == FreeAtZero) {
                if (d < -price_tol) cand_dir = +1;
            }
            if (cand_dir == 0 && (w.state[sj] == AtUpper || w.state[sj] == FreeAtZero)) {
                if (d > price_tol) cand_dir = -1;
            }
            if (cand_dir == 0) continue;
            if (bland) {
                entering = j;
                dir = cand_dir;
                d_best = d;
                break;
            }
            if (std::abs(d) > best) {
                best = std::abs(d);
                entering = j;
                dir = cand_dir;
                d_best = d;
            }
        }
        (void)d_best;

        if (entering < 0) {
            if (phase1) {
                return finish(SolveStatus::infeasible);
            }
            // optimal
            res.objective = obj_now;
            res.values.clear();
            res.values.reserve(static_cast<std::size_t>(w.n));
            for (int j = 0; j < w.n; ++j)
                res.values[lp.variables[static_cast<std::size_t>(j)].name] =
                    w.xval[static_cast<std::size_t>(j)];
            return finish(SolveStatus::optimal);
        }

        auto se = static_cast<std::size_t>(entering);
        wcol.setZero();
        w.column_axpy(entering, 1.0, wcol);
        ftran(w, wcol);

        // ratio test; x_basic(t) = x_basic - dir * t * w_p
        double t_self = w.up[se] - w.lo[se];  // may be inf
        double t_min = t_self;
        int leave_pos = -1;
        double leave_bound = 0;
        double best_pivot = 0;
        for (int p = 0; p < w.m; ++p) {
            double wp = wcol[p];
            if (std::abs(wp) <= kZeroTol) continue;
            int b = w.basis[static_cast<std::size_t>(p)];
            auto sb = static_cast<std::size_t>(b);
            double delta = dir * wp;  // positive: basic decreases
            double x = w.xval[sb];
            double bound;
            if (delta > 0) {
                bound = (x > w.up[sb] + bound_tol(w.up[sb])) ? w.up[sb] : w.lo[sb];
                if (!std::isfinite(bound)) continue;
            } else {
                bound = (x < w.lo[sb] - bound_tol(w.lo[sb])) ? w.lo[sb] : w.up[sb];
                if (!std::isfinite(bound)) continue;
            }
            double ratio = (x - bound) / delta;
            if (ratio < 0) ratio = 0;  // degeneracy beyond tolerance
            bool take;
            if (ratio < t_min - 1e-12) {
                take = true;
            } else if (ratio <= t_min + 1e-12 && leave_pos >= 0) {
                take = bland ? w.basis[static_cast<std::size_t>(p)] <
                                   w.basis[static_cast<std::size_t>(leave_pos)]
                             : std::abs(wp) > best_pivot;
            } else {
                take = false;
            }
            if (take) {
                t_min = std::min(t_min, ratio);
                leave_pos = p;
                leave_bound = bound;
                best_pivot = std::abs(wp);
            }
        }

        if (!std::isfinite(t_min) && leave_pos < 0) {
            return finish(phase1 ? SolveStatus::infeasible : SolveStatus::unbounded);
        }

        if (leave_pos < 0 || (std::isfinite(t_self) && t_self <= t_min)) {
            // bound flip: entering moves across its own range
            double t = t_self;
            for (int p = 0; p < w.m; ++p) {
                double wp = wcol[p];
                if (wp == 0.0) continue;
                w.xval[static_cast<std::size_t>(w.basis[static_cast<std::size_t>(p)])] -=
                    dir * t * wp;
            }
            w.xval[se] = dir > 0 ? w.up[se] : w.lo[se];
            w.state[se] = dir > 0 ? AtUpper : AtLower;
            continue;
        }

        // pivot
        double t = t_min;
        double enter_start = w.xval[se];
        for (int p = 0; p < w.m; ++p) {
            double wp = wcol[p];
            if (wp == 0.0) continue;
            w.xval[static_cast<std::size_t>(w.basis[static_cast<std::size_t>(p)])] -=
                dir * t * wp;
        }
        w.xval[se] = enter_start + dir * t;

        int leaving = w.basis[static_cast<std::size_t>(leave_pos)];
        auto sl = static_cast<std::size_t>(leaving);
        w.xval[sl] = leave_bound;
        w.state[sl] = (leave_bound == w.lo[sl]) ? AtLower : AtUpper;
        w.basic_pos[sl] = -1;

        w.basis[static_cast<std::size_t>(leave_pos)] = entering;
        w.basic_pos[se] = leave_pos;
        w.state[se] = Basic;

        if (best_pivot < kPivotTol) {
            // fragile pivot: refactorize immediately afterwards
            since_refactor = kRefactorInterval;
        } else {
            Eta eta;
            eta.pivot_row = leave_pos;
            eta.pivot_value = wcol[leave_pos];
            for (int p = 0; p < w.m; ++p)
                if (std::abs(wcol[p]) > kZeroTol) eta.entries.emplace_back(p, wcol[p]);
            w.etas.push_back(std::move(eta));
            ++since_refactor;
        }
    }
}

}  // namespace lopf
