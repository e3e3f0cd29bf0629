#include <qinterp/simplex.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qinterp {

namespace {

// Dense row-major tableau.  Column layout: [v+ | v- | slacks | artificials],
// followed by the right-hand side in the last column.
class Tableau {
public:
    Tableau(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    double* row(std::size_t i) { return data_.data() + i * cols_; }
    const double* row(std::size_t i) const { return data_.data() + i * cols_; }
    std::size_t cols() const { return cols_; }
    std::size_t rows() const { return rows_; }

private:
    std::size_t rows_, cols_;
    std::vector<double> data_;
};

} // namespace

PhaseOneResult solve_phase_one(std::size_t num_vars, const std::vector<DenseRow>& rows,
                               const SimplexOptions& options) {
    const std::size_t m = rows.size();
    for (const auto& r : rows) {
        if (r.coeffs.size() != num_vars) {
            throw std::invalid_argument("simplex row width does not match variable count");
        }
    }

    // Normalize to a.x <= b, then flip rows with negative b so every
    // right-hand side is nonnegative.  Flipped rows carry slack -1 and need
    // an artificial variable; the rest start with their slack in the basis.
    std::vector<std::size_t> artificial_rows;
    std::vector<double> norm_sign(m, 1.0); // sign applied after the <= normalization
    for (std::size_t i = 0; i < m; ++i) {
        double b = rows[i].rhs;
        if (rows[i].rel == Relation::GreaterEq) b = -b;
        if (b < 0.0) artificial_rows.push_back(i);
    }

    const std::size_t na = artificial_rows.size();
    const std::size_t col_vplus = 0;
    const std::size_t col_vminus = num_vars;
    const std::size_t col_slack = 2 * num_vars;
    const std::size_t col_art = col_slack + m;
    const std::size_t ncols = col_art + na;  // structural columns
    const std::size_t rhs_col = ncols;

    Tableau tab(m, ncols + 1);
    std::vector<std::size_t> basis(m);
    std::vector<bool> is_artificial_col(ncols, false);

    {
        std::size_t art = 0;
        for (std::size_t i = 0; i < m; ++i) {
            const double le_sign = (rows[i].rel == Relation::GreaterEq) ? -1.0 : 1.0;
            double b = le_sign * rows[i].rhs;
            const double flip = (b < 0.0) ? -1.0 : 1.0;
            norm_sign[i] = le_sign * flip;
            double* r = tab.row(i);
            for (std::size_t j = 0; j < num_vars; ++j) {
                const double a = norm_sign[i] * rows[i].coeffs[j];
                r[col_vplus + j] = a;
                r[col_vminus + j] = -a;
            }
            r[col_slack + i] = flip; // slack of the <= form, possibly flipped
            r[rhs_col] = flip * b;
            if (flip < 0.0) {
                const std::size_t ac = col_art + art;
                r[ac] = 1.0;
                is_artificial_col[ac] = true;
                basis[i] = ac;
                ++art;
            } else {
                basis[i] = col_slack + i;
            }
        }
    }

    // Phase-one objective: minimize the artificial mass.  obj[j] = z_j - c_j;
    // a column improves while obj[j] > 0.
    std::vector<double> obj(ncols + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        if (!is_artificial_col[basis[i]]) continue;
        const double* r = tab.row(i);
        for (std::size_t j = 0; j <= ncols; ++j) obj[j] += r[j];
    }
    for (std::size_t j = col_art; j < ncols; ++j) obj[j] -= 1.0; // c_j = 1 on artificials

    PhaseOneResult result;
    bool bland = false;
    std::uint64_t degenerate_streak = 0;

    while (true) {
        if (result.iterations >= options.max_iterations) {
            throw LpStallError("simplex hit the iteration cap (" +
                                   std::to_string(options.max_iterations) + ") without converging",
                               result.iterations);
        }

        // Entering column.  Artificial columns never re-enter.
        std::size_t enter = ncols;
        if (bland) {
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!is_artificial_col[j] && obj[j] > options.tol) {
                    enter = j;
                    break;
                }
            }
        } else {
            double best = options.tol;
            for (std::size_t j = 0; j < ncols; ++j) {
                if (!is_artificial_col[j] && obj[j] > best) {
                    best = obj[j];
                    enter = j;
                }
            }
        }
        if (enter == ncols) break; // optimal

        // Ratio test: min b_i / a_ie over a_ie > pivot_tol; ties by the
        // smallest basis index (Bland-compatible, deterministic).
        std::size_t leave = m;
        double best_ratio = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const double a = tab.row(i)[enter];
            if (a <= options.pivot_tol) continue;
            const double ratio = tab.row(i)[rhs_col] / a;
            if (ratio < best_ratio - 1e-12 ||
                (ratio <= best_ratio + 1e-12 && (leave == m || basis[i] < basis[leave]))) {
                best_ratio = ratio;
                leave = i;
            }
        }
        if (leave == m) {
            // Phase-one objective is bounded below by zero, so an unbounded
            // improving direction indicates numerical trouble.
            throw LpStallError("simplex found an unbounded phase-one direction", result.iterations);
        }

        // Pivot.
        const double before = obj[rhs_col];
        double* pr = tab.row(leave);
        const double pivot = pr[enter];
        for (std::size_t j = 0; j <= ncols; ++j) pr[j] /= pivot;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave) continue;
            double* r = tab.row(i);
            const double f = r[enter];
            if (std::fabs(f) < 1e-14) continue;
            for (std::size_t j = 0; j <= ncols; ++j) r[j] -= f * pr[j];
            r[enter] = 0.0;
        }
        {
            const double f = obj[enter];
            if (std::fabs(f) >= 1e-14) {
                for (std::size_t j = 0; j <= ncols; ++j) obj[j] -= f * pr[j];
            }
            obj[enter] = 0.0;
        }
        basis[leave] = enter;
        ++result.iterations;

        if (before - obj[rhs_col] <= 1e-12) {
            if (++degenerate_streak >= options.stall_switch) bland = true;
        } else {
            degenerate_streak = 0;
        }
    }

    result.objective = obj[rhs_col];
    result.feasible = result.objective <= options.tol;
    if (result.feasible) {
        std::vector<double> full(ncols, 0.0);
        for (std::size_t i = 0; i < m; ++i) full[basis[i]] = tab.row(i)[rhs_col];
        result.solution.resize(num_vars);
        for (std::size_t j = 0; j < num_vars; ++j) {
            result.solution[j] = full[col_vplus + j] - full[col_vminus + j];
        }
    }
    return result;
}

} // namespace qinterp
