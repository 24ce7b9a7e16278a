#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace pvopt::lp {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { LE, EQ, GE };

enum class Status {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
    Numerical,
};

const char* to_string(Status s);

// min cost'x  subject to  row senses and variable bounds.
// Build columns and rows in any order; duplicate (row, col) entries are
// summed. All indices are dense and zero-based.
struct Problem {
    std::vector<double> cost;
    std::vector<double> lower, upper;
    std::vector<Sense> sense;
    std::vector<double> rhs;
    struct Entry {
        int row, col;
        double value;
    };
    std::vector<Entry> entries;

    int add_variable(double cost_coeff, double lo, double hi);
    int add_row(Sense s, double rhs_value);
    void add_entry(int row, int col, double value);
    int num_variables() const { return static_cast<int>(cost.size()); }
    int num_rows() const { return static_cast<int>(rhs.size()); }
};

struct Options {
    double feasibility_tol = 1e-9;
    double optimality_tol = 1e-9;
    int max_iterations = 500000;
    int refactor_interval = 100;
    bool scale = true;  // geometric-mean equilibration, powers of two
    int stall_limit = 300;  // degenerate pivots before switching to Bland's rule
};

struct Result {
    Status status = Status::Numerical;
    double objective = 0;
    std::vector<double> x;              // primal values, one per variable
    std::vector<double> row_duals;      // one per row
    std::vector<double> reduced_costs;  // one per variable
    std::vector<double> row_activity;   // a_i . x

    // Farkas-style certificate when Infeasible: y with y'b strictly above
    // the maximum of y'Ax over the bounds. Direction of unboundedness when
    // Unbounded: feasible ray with negative cost.
    std::vector<double> infeasibility_certificate;
    std::vector<double> unbounded_ray;

    int iterations = 0;
    int refactorizations = 0;
    double primal_residual = 0;  // max constraint/bound violation
    double dual_residual = 0;    // max dual feasibility violation
    double duality_gap = 0;      // |primal - dual| / (1 + |primal|)
    double phase1_infeasibility = 0;
};

Result solve(const Problem& p, const Options& opt = {});

// Plain-text dump for external cross-checking; read_problem parses the
// same format.
void write_problem(std::ostream& out, const Problem& p);
Problem read_problem(std::istream& in);

}  // namespace pvopt::lp
