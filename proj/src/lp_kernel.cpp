#include "pvopt/lp.hpp"

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "pvopt/csvio.hpp"

namespace pvopt::lp {

const char* to_string(Status s) {
    switch (s) {
        case Status::Optimal: return "optimal";
        case Status::Infeasible: return "infeasible";
        case Status::Unbounded: return "unbounded";
        case Status::IterationLimit: return "iteration-limit";
        case Status::Numerical: return "numerical-failure";
    }
    return "?";
}

int Problem::add_variable(double cost_coeff, double lo, double hi) {
    cost.push_back(cost_coeff);
    lower.push_back(lo);
    upper.push_back(hi);
    return static_cast<int>(cost.size()) - 1;
}

int Problem::add_row(Sense s, double rhs_value) {
    sense.push_back(s);
    rhs.push_back(rhs_value);
    return static_cast<int>(rhs.size()) - 1;
}

void Problem::add_entry(int row, int col, double value) {
    entries.push_back(Entry{row, col, value});
}

void write_problem(std::ostream& out, const Problem& p) {
    const int n = p.num_variables(), m = p.num_rows();
    out << "pvopt-lp 1\n";
    out << "vars " << n << " rows " << m << "\n";
    out << "min";
    for (int j = 0; j < n; ++j) out << ' ' << format_double(p.cost[j]);
    out << "\n";
    for (int j = 0; j < n; ++j)
        out << "bnd " << format_double(p.lower[j]) << ' ' << format_double(p.upper[j]) << "\n";
    // entries grouped by row for readability
    std::vector<std::vector<std::pair<int, double>>> rows(m);
    for (const auto& e : p.entries) rows[e.row].emplace_back(e.col, e.value);
    static const char sc[] = {'L', 'E', 'G'};
    for (int i = 0; i < m; ++i) {
        out << "row " << sc[static_cast<int>(p.sense[i])] << ' ' << format_double(p.rhs[i]);
        for (auto& [c, v] : rows[i]) out << ' ' << c << ' ' << format_double(v);
        out << "\n";
    }
}

Problem read_problem(std::istream& in) {
    const std::string fname = "<lp-stream>";
    Problem p;
    std::string tok;
    auto need = [&](const std::string& what) {
        if (!(in >> tok)) throw ParseError(fname, 0, "unexpected end of input, expected " + what);
        return tok;
    };
    if (need("magic") != "pvopt-lp" || need("version") != "1")
        throw ParseError(fname, 0, "not a pvopt-lp 1 stream");
    need("'vars'");
    int n = static_cast<int>(parse_long(need("var count"), fname, 0, "vars"));
    need("'rows'");
    int m = static_cast<int>(parse_long(need("row count"), fname, 0, "rows"));
    need("'min'");
    for (int j = 0; j < n; ++j) p.cost.push_back(parse_double(need("cost"), fname, 0, "cost"));
    p.lower.resize(n);
    p.upper.resize(n);
    for (int j = 0; j < n; ++j) {
        need("'bnd'");
        p.lower[j] = parse_double(need("lower"), fname, 0, "lower");
        p.upper[j] = parse_double(need("upper"), fname, 0, "upper");
    }
    for (int i = 0; i < m; ++i) {
        need("'row'");
        std::string s = need("sense");
        Sense sense = s == "L" ? Sense::LE : s == "E" ? Sense::EQ : Sense::GE;
        if (s != "L" && s != "E" && s != "G") throw ParseError(fname, 0, "bad row sense '" + s + "'");
        p.add_row(sense, parse_double(need("rhs"), fname, 0, "rhs"));
        // remaining tokens on this line are col/value pairs
        std::string line;
        std::getline(in, line);
        std::istringstream ls(line);
        int c;
        std::string v;
        while (ls >> c >> v) p.add_entry(i, c, parse_double(v, fname, 0, "entry"));
    }
    return p;
}

namespace {

enum class VStat : unsigned char { AtLower, AtUpper, Free, InBasis };

struct Csc {
    std::vector<int> ptr, idx;
    std::vector<double> val;
    int cols() const { return static_cast<int>(ptr.size()) - 1; }
};

double pow2_round(double s) {
    if (!(s > 0) || !std::isfinite(s)) return 1.0;
    return std::ldexp(1.0, static_cast<int>(std::lround(std::log2(s))));
}

class Simplex {
  public:
    Simplex(const Problem& p, const Options& o) : prob_(p), opt_(o) {}

    Result run();

  private:
    enum class Phase { One, Two };
    enum class StepResult { Done, Pivoted, Infeasible, Unbounded, IterLimit, NeedRefactor };

    const Problem& prob_;
    const Options& opt_;

    int n_ = 0;       // user variables
    int m_ = 0;       // rows
    int total_ = 0;   // user + logical columns

    Csc cols_;                    // scaled [A | I]
    std::vector<double> cost_;    // scaled user costs, logicals 0
    std::vector<double> lo_, hi_; // scaled bounds
    std::vector<double> b_;       // scaled rhs
    std::vector<double> rscale_, cscale_;

    std::vector<int> basic_;          // column in each basis slot
    std::vector<int> basis_slot_;     // slot of a column, -1 when nonbasic
    std::vector<VStat> stat_;
    std::vector<double> xv_;          // resting values of nonbasic columns
    std::vector<double> xb_;          // values of basic columns per slot
    std::vector<signed char> gsign_;  // phase-1 infeasibility direction per slot

    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu_;
    bool lu_valid_ = false;
    struct Eta {
        int pos;
        double pivot;
        std::vector<std::pair<int, double>> off;
    };
    std::vector<Eta> etas_;
    int pivots_since_refactor_ = 0;

    int iterations_ = 0;
    int refactorizations_ = 0;
    int stall_ = 0;
    bool bland_ = false;

    // terminal data
    std::vector<double> farkas_;  // scaled phase-1 duals at infeasibility proof
    int ray_col_ = -1;
    double ray_sigma_ = 0;
    std::vector<double> ray_w_;

    void build();
    bool factorize();
    void reset_to_logical_basis();
    void compute_xb();
    void ftran(std::vector<double>& v);
    void btran(std::vector<double>& v);
    void gather_column(int j, std::vector<double>& dense) const;
    double column_dot(int j, const std::vector<double>& y) const;
    void refresh_gsign(double& total_infeas);
    double bound_tol(double bound) const {
        return std::isfinite(bound) ? opt_.feasibility_tol * (1.0 + std::fabs(bound))
                                    : opt_.feasibility_tol;
    }
    StepResult iterate_once(Phase phase);
    Status drive(Phase phase);
    Result extract(Status st);
};

void Simplex::build() {
    n_ = prob_.num_variables();
    m_ = prob_.num_rows();
    total_ = n_ + m_;

    for (int j = 0; j < n_; ++j) {
        if (!std::isfinite(prob_.cost[j]))
            throw std::invalid_argument("lp::solve: non-finite objective coefficient");
        if (std::isnan(prob_.lower[j]) || std::isnan(prob_.upper[j]))
            throw std::invalid_argument("lp::solve: NaN variable bound");
    }
    for (int i = 0; i < m_; ++i)
        if (!std::isfinite(prob_.rhs[i]))
            throw std::invalid_argument("lp::solve: non-finite rhs");
    for (const auto& e : prob_.entries) {
        if (e.row < 0 || e.row >= m_ || e.col < 0 || e.col >= n_)
            throw std::invalid_argument("lp::solve: entry index out of range");
        if (!std::isfinite(e.value))
            throw std::invalid_argument("lp::solve: non-finite matrix entry");
    }

    // geometric-mean equilibration, factors rounded to powers of two so the
    // scaled data is exactly representable
    rscale_.assign(m_, 1.0);
    cscale_.assign(n_, 1.0);
    if (opt_.scale && !prob_.entries.empty()) {
        for (int pass = 0; pass < 2; ++pass) {
            std::vector<double> mn(m_, kInf), mx(m_, 0.0);
            for (const auto& e : prob_.entries) {
                double a = std::fabs(e.value) * rscale_[e.row] * cscale_[e.col];
                if (a == 0) continue;
                mn[e.row] = std::min(mn[e.row], a);
                mx[e.row] = std::max(mx[e.row], a);
            }
            for (int i = 0; i < m_; ++i)
                if (mx[i] > 0) rscale_[i] /= pow2_round(std::sqrt(mn[i] * mx[i]));
            std::vector<double> cn(n_, kInf), cx(n_, 0.0);
            for (const auto& e : prob_.entries) {
                double a = std::fabs(e.value) * rscale_[e.row] * cscale_[e.col];
                if (a == 0) continue;
                cn[e.col] = std::min(cn[e.col], a);
                cx[e.col] = std::max(cx[e.col], a);
            }
            for (int j = 0; j < n_; ++j)
                if (cx[j] > 0) cscale_[j] /= pow2_round(std::sqrt(cn[j] * cx[j]));
        }
    }

    // scaled CSC of user columns followed by unit logical columns
    std::vector<Problem::Entry> es = prob_.entries;
    std::sort(es.begin(), es.end(), [](const auto& a, const auto& b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    cols_.ptr.assign(total_ + 1, 0);
    cols_.idx.reserve(es.size() + m_);
    cols_.val.reserve(es.size() + m_);
    size_t k = 0;
    for (int j = 0; j < n_; ++j) {
        cols_.ptr[j] = static_cast<int>(cols_.idx.size());
        while (k < es.size() && es[k].col == j) {
            int row = es[k].row;
            double v = 0;
            while (k < es.size() && es[k].col == j && es[k].row == row) {
                v += es[k].value;
                ++k;
            }
            v *= rscale_[row] * cscale_[j];
            if (v != 0) {
                cols_.idx.push_back(row);
                cols_.val.push_back(v);
            }
        }
    }
    for (int i = 0; i < m_; ++i) {
        cols_.ptr[n_ + i] = static_cast<int>(cols_.idx.size());
        cols_.idx.push_back(i);
        cols_.val.push_back(1.0);
    }
    cols_.ptr[total_] = static_cast<int>(cols_.idx.size());

    cost_.assign(total_, 0.0);
    lo_.assign(total_, 0.0);
    hi_.assign(total_, 0.0);
    for (int j = 0; j < n_; ++j) {
        cost_[j] = prob_.cost[j] * cscale_[j];
        lo_[j] = prob_.lower[j] / cscale_[j];
        hi_[j] = prob_.upper[j] / cscale_[j];
    }
    for (int i = 0; i < m_; ++i) {
        switch (prob_.sense[i]) {
            case Sense::LE: lo_[n_ + i] = 0; hi_[n_ + i] = kInf; break;
            case Sense::EQ: lo_[n_ + i] = 0; hi_[n_ + i] = 0; break;
            case Sense::GE: lo_[n_ + i] = -kInf; hi_[n_ + i] = 0; break;
        }
    }
    b_.resize(m_);
    for (int i = 0; i < m_; ++i) b_[i] = prob_.rhs[i] * rscale_[i];
}

void Simplex::reset_to_logical_basis() {
    basic_.resize(m_);
    basis_slot_.assign(total_, -1);
    stat_.assign(total_, VStat::AtLower);
    xv_.assign(total_, 0.0);
    for (int j = 0; j < total_; ++j) {
        if (std::isfinite(lo_[j])) {
            stat_[j] = VStat::AtLower;
            xv_[j] = lo_[j];
        } else if (std::isfinite(hi_[j])) {
            stat_[j] = VStat::AtUpper;
            xv_[j] = hi_[j];
        } else {
            stat_[j] = VStat::Free;
            xv_[j] = 0.0;
        }
    }
    for (int i = 0; i < m_; ++i) {
        basic_[i] = n_ + i;
        basis_slot_[n_ + i] = i;
        stat_[n_ + i] = VStat::InBasis;
    }
    xb_.assign(m_, 0.0);
    gsign_.assign(m_, 0);
}

bool Simplex::factorize() {
    etas_.clear();
    pivots_since_refactor_ = 0;
    ++refactorizations_;
    if (m_ == 0) {
        lu_valid_ = true;
        return true;
    }
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(cols_.idx.size());
    for (int slot = 0; slot < m_; ++slot) {
        int j = basic_[slot];
        for (int t = cols_.ptr[j]; t < cols_.ptr[j + 1]; ++t)
            trips.emplace_back(cols_.idx[t], slot, cols_.val[t]);
    }
    Eigen::SparseMatrix<double> B(m_, m_);
    B.setFromTriplets(trips.begin(), trips.end());
    lu_.analyzePattern(B);
    lu_.factorize(B);
    lu_valid_ = lu_.info() == Eigen::Success;
    return lu_valid_;
}

void Simplex::ftran(std::vector<double>& v) {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> mv(v.data(), m_);
    Eigen::VectorXd z = lu_.solve(mv);
    std::copy(z.data(), z.data() + m_, v.begin());
    for (const auto& e : etas_) {
        double zp = v[e.pos] / e.pivot;
        for (const auto& [i, a] : e.off) v[i] -= a * zp;
        v[e.pos] = zp;
    }
}

void Simplex::btran(std::vector<double>& v) {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
        double dot = 0;
        for (const auto& [i, a] : it->off) dot += a * v[i];
        v[it->pos] = (v[it->pos] - dot) / it->pivot;
    }
    Eigen::Map<Eigen::VectorXd> mv(v.data(), m_);
    Eigen::VectorXd z = lu_.transpose().solve(mv);
    std::copy(z.data(), z.data() + m_, v.begin());
}

void Simplex::gather_column(int j, std::vector<double>& dense) const {
    std::fill(dense.begin(), dense.end(), 0.0);
    for (int t = cols_.ptr[j]; t < cols_.ptr[j + 1]; ++t) dense[cols_.idx[t]] = cols_.val[t];
}

double Simplex::column_dot(int j, const std::vector<double>& y) const {
    double d = 0;
    for (int t = cols_.ptr[j]; t < cols_.ptr[j + 1]; ++t) d += cols_.val[t] * y[cols_.idx[t]];
    return d;
}

void Simplex::compute_xb() {
    std::vector<double> rhs = b_;
    for (int j = 0; j < total_; ++j) {
        if (stat_[j] == VStat::InBasis || xv_[j] == 0.0) continue;
        for (int t = cols_.ptr[j]; t < cols_.ptr[j + 1]; ++t)
            rhs[cols_.idx[t]] -= cols_.val[t] * xv_[j];
    }
    ftran(rhs);
    xb_ = rhs;
}

void Simplex::refresh_gsign(double& total_infeas) {
    total_infeas = 0;
    for (int i = 0; i < m_; ++i) {
        int k = basic_[i];
        double v = xb_[i];
        if (v > hi_[k] + bound_tol(hi_[k])) {
            gsign_[i] = 1;
            total_infeas += v - hi_[k];
        } else if (v < lo_[k] - bound_tol(lo_[k])) {
            gsign_[i] = -1;
            total_infeas += lo_[k] - v;
        } else {
            gsign_[i] = 0;
        }
    }
}

Simplex::StepResult Simplex::iterate_once(Phase phase) {
    const double dtol = opt_.optimality_tol;
    const double ztol = 1e-11;

    // duals for the phase objective
    std::vector<double> y(m_, 0.0);
    if (phase == Phase::One) {
        for (int i = 0; i < m_; ++i) y[i] = static_cast<double>(gsign_[i]);
    } else {
        for (int i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
    }
    btran(y);

    // pricing: Dantzig by default, Bland when stalling
    int enter = -1;
    double enter_d = 0;
    int enter_sigma = 0;
    double best = dtol;
    for (int j = 0; j < total_; ++j) {
        VStat s = stat_[j];
        if (s == VStat::InBasis) continue;
        if (lo_[j] == hi_[j]) continue;  // fixed, never eligible
        double cj = phase == Phase::One ? 0.0 : cost_[j];
        double d = cj - column_dot(j, y);
        int sigma = 0;
        if (s == VStat::AtLower && d < -dtol) sigma = 1;
        else if (s == VStat::AtUpper && d > dtol) sigma = -1;
        else if (s == VStat::Free && std::fabs(d) > dtol) sigma = d < 0 ? 1 : -1;
        if (sigma == 0) continue;
        if (bland_) {
            enter = j;
            enter_d = d;
            enter_sigma = sigma;
            break;
        }
        if (std::fabs(d) > best) {
            best = std::fabs(d);
            enter = j;
            enter_d = d;
            enter_sigma = sigma;
        }
    }
    (void)enter_d;

    if (enter < 0) {
        if (phase == Phase::One) {
            farkas_ = y;  // scaled phase-1 duals certify infeasibility
            return StepResult::Infeasible;
        }
        return StepResult::Done;
    }

    std::vector<double> w(m_, 0.0);
    gather_column(enter, w);
    ftran(w);
    const double sigma = enter_sigma;

    // ratio test: first the minimum blocking step, then the best-conditioned
    // block within a tie window
    double span = hi_[enter] - lo_[enter];  // inf for free/one-sided columns
    double tmin = span;                      // entering may block itself
    for (int i = 0; i < m_; ++i) {
        double wi = w[i];
        if (std::fabs(wi) <= ztol) continue;
        double delta = -sigma * wi;
        int k = basic_[i];
        signed char g = phase == Phase::One ? gsign_[i] : 0;
        double t;
        if (delta > 0) {
            if (g == 1) continue;  // already above its upper bound, moving up
            double bound = g == -1 ? lo_[k] : hi_[k];
            if (!std::isfinite(bound)) continue;
            t = (bound - xb_[i]) / delta;
        } else {
            if (g == -1) continue;
            double bound = g == 1 ? hi_[k] : lo_[k];
            if (!std::isfinite(bound)) continue;
            t = (xb_[i] - bound) / (-delta);
        }
        if (t < 0) t = 0;
        if (t < tmin) tmin = t;
    }

    if (!std::isfinite(tmin)) {
        if (phase == Phase::One) return StepResult::NeedRefactor;  // cannot happen with exact data
        ray_col_ = enter;
        ray_sigma_ = sigma;
        ray_w_ = w;
        return StepResult::Unbounded;
    }

    // pick the leaving slot within the tie window
    int leave = -1;           // -1: entering flips to its opposite bound
    int leave_side = 0;       // -1 lower, +1 upper
    double leave_pivot = 0;
    const double tie = tmin + 1e-9 * (1.0 + tmin);
    if (tmin < span || std::isfinite(span)) {
        for (int i = 0; i < m_; ++i) {
            double wi = w[i];
            if (std::fabs(wi) <= ztol) continue;
            double delta = -sigma * wi;
            int k = basic_[i];
            signed char g = phase == Phase::One ? gsign_[i] : 0;
            double t;
            int side;
            if (delta > 0) {
                if (g == 1) continue;
                double bound = g == -1 ? lo_[k] : hi_[k];
                if (!std::isfinite(bound)) continue;
                t = (bound - xb_[i]) / delta;
                side = g == -1 ? -1 : 1;
            } else {
                if (g == -1) continue;
                double bound = g == 1 ? hi_[k] : lo_[k];
                if (!std::isfinite(bound)) continue;
                t = (xb_[i] - bound) / (-delta);
                side = g == 1 ? 1 : -1;
            }
            if (t < 0) t = 0;
            if (t > tie) continue;
            bool better;
            if (leave < 0) {
                better = tmin < span;  // prefer a basis change only if it actually blocks
            } else if (bland_) {
                better = basic_[i] < basic_[leave];
            } else {
                better = std::fabs(wi) > std::fabs(leave_pivot);
            }
            if (better) {
                leave = i;
                leave_side = side;
                leave_pivot = wi;
            }
        }
    }

    if (leave >= 0 && std::fabs(leave_pivot) < 1e-8 && pivots_since_refactor_ > 0)
        return StepResult::NeedRefactor;  // retry this iteration with a fresh factorization

    double step = leave >= 0 ? std::max(0.0, std::min(tmin, tie)) : span;
    // re-evaluate the exact step for the chosen leaver so it lands on its bound
    if (leave >= 0) {
        double delta = -sigma * w[leave];
        int k = basic_[leave];
        double bound = leave_side < 0 ? lo_[k] : hi_[k];
        step = (bound - xb_[leave]) / delta;
        if (step < 0) step = 0;
    }

    // apply the move
    for (int i = 0; i < m_; ++i) xb_[i] -= sigma * step * w[i];
    ++iterations_;
    if (step > 1e-10) {
        stall_ = 0;
        if (bland_) bland_ = false;
    } else if (++stall_ > opt_.stall_limit) {
        bland_ = true;
    }

    if (leave < 0) {
        // bound flip, no basis change
        stat_[enter] = sigma > 0 ? VStat::AtUpper : VStat::AtLower;
        xv_[enter] = sigma > 0 ? hi_[enter] : lo_[enter];
        return StepResult::Pivoted;
    }

    int k = basic_[leave];
    stat_[k] = leave_side < 0 ? VStat::AtLower : VStat::AtUpper;
    xv_[k] = leave_side < 0 ? lo_[k] : hi_[k];
    basis_slot_[k] = -1;

    double enter_val = (stat_[enter] == VStat::Free ? 0.0 : xv_[enter]) + sigma * step;
    basic_[leave] = enter;
    basis_slot_[enter] = leave;
    stat_[enter] = VStat::InBasis;
    xb_[leave] = enter_val;

    Eta e;
    e.pos = leave;
    e.pivot = w[leave];
    for (int i = 0; i < m_; ++i)
        if (i != leave && std::fabs(w[i]) > ztol) e.off.emplace_back(i, w[i]);
    etas_.push_back(std::move(e));
    ++pivots_since_refactor_;
    return StepResult::Pivoted;
}

Status Simplex::drive(Phase phase) {
    double infeas = 0;
    int refactor_retries = 0;
    while (true) {
        if (iterations_ >= opt_.max_iterations) return Status::IterationLimit;
        if (pivots_since_refactor_ >= opt_.refactor_interval) {
            if (!factorize()) return Status::Numerical;
            compute_xb();
        }
        if (phase == Phase::One) {
            refresh_gsign(infeas);
            if (infeas == 0) return Status::Optimal;  // feasible, hand over to phase 2
        }
        StepResult r = iterate_once(phase);
        switch (r) {
            case StepResult::Pivoted: refactor_retries = 0; break;
            case StepResult::Done: return Status::Optimal;
            case StepResult::Infeasible: return Status::Infeasible;
            case StepResult::Unbounded: return Status::Unbounded;
            case StepResult::IterLimit: return Status::IterationLimit;
            case StepResult::NeedRefactor:
                if (++refactor_retries > 3 || !factorize()) return Status::Numerical;
                compute_xb();
                break;
        }
    }
}

Result Simplex::extract(Status st) {
    Result res;
    res.status = st;
    res.iterations = iterations_;
    res.refactorizations = refactorizations_;

    // primal point in user space
    res.x.assign(n_, 0.0);
    for (int j = 0; j < n_; ++j) {
        double v = stat_[j] == VStat::InBasis ? xb_[basis_slot_[j]] : xv_[j];
        res.x[j] = v * cscale_[j];
    }
    double obj = 0;
    for (int j = 0; j < n_; ++j) obj += prob_.cost[j] * res.x[j];
    res.objective = obj;

    res.row_activity.assign(m_, 0.0);
    for (const auto& e : prob_.entries) res.row_activity[e.row] += e.value * res.x[e.col];

    // duals in user space (phase-2 objective)
    std::vector<double> y(m_, 0.0);
    for (int i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
    btran(y);
    res.row_duals.assign(m_, 0.0);
    for (int i = 0; i < m_; ++i) res.row_duals[i] = y[i] * rscale_[i];

    res.reduced_costs.assign(n_, 0.0);
    std::vector<double> coldot(n_, 0.0);
    for (const auto& e : prob_.entries) coldot[e.col] += e.value * res.row_duals[e.row];
    for (int j = 0; j < n_; ++j) res.reduced_costs[j] = prob_.cost[j] - coldot[j];

    // residuals against the original data
    double pres = 0;
    for (int i = 0; i < m_; ++i) {
        double act = res.row_activity[i], r = prob_.rhs[i];
        switch (prob_.sense[i]) {
            case Sense::LE: pres = std::max(pres, act - r); break;
            case Sense::GE: pres = std::max(pres, r - act); break;
            case Sense::EQ: pres = std::max(pres, std::fabs(act - r)); break;
        }
    }
    for (int j = 0; j < n_; ++j) {
        if (std::isfinite(prob_.lower[j])) pres = std::max(pres, prob_.lower[j] - res.x[j]);
        if (std::isfinite(prob_.upper[j])) pres = std::max(pres, res.x[j] - prob_.upper[j]);
    }
    res.primal_residual = pres;

    if (st == Status::Optimal) {
        double dres = 0;
        double dual_obj = 0;
        for (int i = 0; i < m_; ++i) dual_obj += res.row_duals[i] * prob_.rhs[i];
        for (int j = 0; j < n_; ++j) {
            double d = res.reduced_costs[j];
            switch (stat_[j]) {
                case VStat::InBasis: dres = std::max(dres, std::fabs(d)); break;
                case VStat::AtLower:
                    if (prob_.lower[j] != prob_.upper[j]) dres = std::max(dres, -d);
                    dual_obj += d * prob_.lower[j];
                    break;
                case VStat::AtUpper:
                    if (prob_.lower[j] != prob_.upper[j]) dres = std::max(dres, d);
                    dual_obj += d * prob_.upper[j];
                    break;
                case VStat::Free: dres = std::max(dres, std::fabs(d)); break;
            }
        }
        // logical columns: a basic slack forces its row dual toward zero, a
        // nonbasic slack rests at zero, so neither adds to the dual value;
        // sign conditions on row duals are implied by the reduced costs of
        // the logicals: d_logical = -y_i
        for (int i = 0; i < m_; ++i) {
            int j = n_ + i;
            if (stat_[j] == VStat::InBasis) continue;
            double d = -res.row_duals[i];
            if (prob_.sense[i] == Sense::LE) dres = std::max(dres, -d);
            else if (prob_.sense[i] == Sense::GE) dres = std::max(dres, d);
        }
        res.dual_residual = std::max(dres, 0.0);
        res.duality_gap = std::fabs(obj - dual_obj) / (1.0 + std::fabs(obj));
    }

    if (st == Status::Infeasible && !farkas_.empty()) {
        res.infeasibility_certificate.assign(m_, 0.0);
        for (int i = 0; i < m_; ++i) res.infeasibility_certificate[i] = farkas_[i] * rscale_[i];
        double infeas = 0;
        refresh_gsign(infeas);
        res.phase1_infeasibility = infeas;
    }

    if (st == Status::Unbounded && ray_col_ >= 0) {
        res.unbounded_ray.assign(n_, 0.0);
        if (ray_col_ < n_) res.unbounded_ray[ray_col_] = ray_sigma_ * cscale_[ray_col_];
        for (int i = 0; i < m_; ++i) {
            int k = basic_[i];
            if (k < n_ && std::fabs(ray_w_[i]) > 1e-13)
                res.unbounded_ray[k] = -ray_sigma_ * ray_w_[i] * cscale_[k];
        }
    }
    return res;
}

Result Simplex::run() {
    build();

    for (int j = 0; j < n_; ++j) {
        if (prob_.lower[j] > prob_.upper[j]) {
            Result res;
            res.status = Status::Infeasible;
            res.x.assign(n_, 0.0);
            res.row_duals.assign(m_, 0.0);
            res.reduced_costs.assign(n_, 0.0);
            res.row_activity.assign(m_, 0.0);
            return res;
        }
    }

    reset_to_logical_basis();
    if (!factorize()) {
        Result res;
        res.status = Status::Numerical;
        return res;
    }
    compute_xb();

    int restarts = 0;
    for (int round = 0; round < 4; ++round) {
        Status s1 = drive(Phase::One);
        if (s1 == Status::Infeasible || s1 == Status::IterationLimit) return extract(s1);
        if (s1 == Status::Numerical) {
            if (++restarts > 2) return extract(Status::Numerical);
            reset_to_logical_basis();
            if (!factorize()) return extract(Status::Numerical);
            compute_xb();
            continue;
        }
        Status s2 = drive(Phase::Two);
        if (s2 == Status::Unbounded || s2 == Status::IterationLimit) return extract(s2);
        if (s2 == Status::Numerical) {
            if (++restarts > 2) return extract(Status::Numerical);
            reset_to_logical_basis();
            if (!factorize()) return extract(Status::Numerical);
            compute_xb();
            continue;
        }

        // clean verification pass on a fresh factorization
        if (!factorize()) return extract(Status::Numerical);
        compute_xb();
        double infeas = 0;
        refresh_gsign(infeas);
        if (infeas == 0) {
            Result res = extract(Status::Optimal);
            if (res.primal_residual <= 1e-6 && res.dual_residual <= 1e-6) return res;
            if (round == 3) return res;
        }
        // feasibility or optimality drifted: run another round
    }
    return extract(Status::Numerical);
}

}  // namespace

Result solve(const Problem& p, const Options& opt) {
    if (p.lower.size() != p.cost.size() || p.upper.size() != p.cost.size())
        throw std::invalid_argument("lp::solve: inconsistent variable arrays");
    if (p.sense.size() != p.rhs.size())
        throw std::invalid_argument("lp::solve: inconsistent row arrays");
    Simplex s(p, opt);
    return s.run();
}

}  // namespace pvopt::lp
