#include "admmrate/json_io.hpp"

#include <stdexcept>

namespace admmrate {

json to_json(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
    return out;
}

Matrix matrix_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("matrix must be an array of rows");
    const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
    if (rows == 0) return Matrix(0, 0);
    const Eigen::Index cols = static_cast<Eigen::Index>(j.at(0).size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const json& row = j.at(r);
        if (static_cast<Eigen::Index>(row.size()) != cols) {
            throw std::invalid_argument("matrix rows have inconsistent lengths");
        }
        for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = row.at(c).get<double>();
    }
    return m;
}

Vector vector_from_json(const json& j) {
    if (!j.is_array()) throw std::invalid_argument("vector must be an array");
    Vector v(static_cast<Eigen::Index>(j.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = j.at(i).get<double>();
    return v;
}

json to_json(const std::vector<std::complex<double>>& eigs) {
    json out = json::array();
    for (const auto& z : eigs) {
        out.push_back({{"re", z.real()}, {"im", z.imag()}});
    }
    return out;
}

std::vector<std::complex<double>> eigs_from_json(const json& j) {
    std::vector<std::complex<double>> out;
    for (const json& e : j) {
        out.emplace_back(e.at("re").get<double>(), e.at("im").get<double>());
    }
    return out;
}

json to_json(const SeparableFunction& f) {
    switch (f.kind) {
    case FunctionKind::Quadratic:
        return {{"kind", "quadratic"}, {"Q", to_json(f.Q)}, {"c", to_json(f.c)}};
    case FunctionKind::WeightedL1:
        return {{"kind", "weighted_l1"}, {"w", to_json(f.w)}};
    case FunctionKind::PiecewiseLinear1DArray: {
        json pieces = json::array();
        for (const PiecewiseLinear1D& p : f.pieces) {
            pieces.push_back(
                {{"breakpoints", p.breakpoints}, {"slopes", p.slopes}});
        }
        return {{"kind", "piecewise_linear"}, {"pieces", std::move(pieces)}};
    }
    }
    throw std::logic_error("unknown function kind");
}

SeparableFunction function_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "quadratic") {
        return SeparableFunction::quadratic(matrix_from_json(j.at("Q")),
                                            vector_from_json(j.at("c")));
    }
    if (kind == "weighted_l1") {
        return SeparableFunction::weighted_l1(vector_from_json(j.at("w")));
    }
    if (kind == "piecewise_linear") {
        std::vector<PiecewiseLinear1D> pieces;
        for (const json& p : j.at("pieces")) {
            PiecewiseLinear1D pl;
            pl.breakpoints = p.at("breakpoints").get<std::vector<double>>();
            pl.slopes = p.at("slopes").get<std::vector<double>>();
            pieces.push_back(std::move(pl));
        }
        return SeparableFunction::piecewise_linear(std::move(pieces));
    }
    throw std::invalid_argument("unknown function kind: " + kind);
}

json to_json(const SplitProblem& p) {
    return {{"A1", to_json(p.A1)}, {"A2", to_json(p.A2)},
            {"b", to_json(p.b)},   {"E", to_json(p.E)},
            {"f1", to_json(p.f1)}, {"f2", to_json(p.f2)}};
}

SplitProblem problem_from_json(const json& j) {
    SplitProblem p;
    p.A1 = matrix_from_json(j.at("A1"));
    p.A2 = matrix_from_json(j.at("A2"));
    p.b = vector_from_json(j.at("b"));
    p.E = matrix_from_json(j.at("E"));
    p.f1 = function_from_json(j.at("f1"));
    p.f2 = function_from_json(j.at("f2"));
    return p;
}

json to_json(const RunResult& r, bool include_history) {
    json out = {{"z", to_json(r.z)},
                {"x1", to_json(r.x1)},
                {"x2", to_json(r.x2)},
                {"iterations", r.iterations},
                {"reason", to_string(r.reason)}};
    if (include_history) {
        json hist = json::array();
        for (const IterationRecord& rec : r.history) {
            hist.push_back({{"iteration", rec.iteration},
                            {"state_delta", rec.state_delta},
                            {"constraint_residual", rec.constraint_residual},
                            {"objective", rec.objective}});
        }
        out["history"] = std::move(hist);
    }
    return out;
}

json to_json(const DirectionBox& b) {
    return {{"n_bar", b.n_bar}, {"n_low", b.n_low},
            {"p_low", b.p_low}, {"p_bar", b.p_bar}};
}

json to_json(const AlphaBox& box) {
    return {{"d1", to_json(box.d1)}, {"d2", to_json(box.d2)}};
}

AlphaBox alpha_box_from_json(const json& j) {
    AlphaBox box;
    for (int i = 1; i <= 2; ++i) {
        const json& d = j.at(i == 1 ? "d1" : "d2");
        DirectionBox b;
        b.n_bar = d.at("n_bar").get<double>();
        b.n_low = d.at("n_low").get<double>();
        b.p_low = d.at("p_low").get<double>();
        b.p_bar = d.at("p_bar").get<double>();
        if (i == 1) box.d1 = b; else box.d2 = b;
    }
    return box;
}

json to_json(const LocusParams& lp) {
    return {{"real_intervals",
             json::array({json::array({-lp.n_bar, -lp.n_low}),
                          json::array({lp.p_low, lp.p_bar})})},
            {"circle", {{"inner", lp.r_low}, {"outer", lp.r_bar}}},
            {"k1", lp.k1},
            {"k2", lp.k2},
            {"c_low", lp.c_low},
            {"c_high", lp.c_high}};
}

json to_json(const BoundSpectrum& bs) {
    const auto dir = [](const DirectionSpectrum& sp) {
        return json{{"lower", to_json(sp.ell)},
                    {"upper", to_json(sp.nu)},
                    {"kernel_count", sp.kernel_count}};
    };
    return {{"d1", dir(bs.d1)}, {"d2", dir(bs.d2)}, {"dim", bs.m}};
}

json to_json(const MuResult& mu) {
    return {{"value", mu.value}, {"exact", mu.exact}};
}

json to_json(const RateReport& rep) {
    return {{"rows", rep.rows},
            {"cols", rep.cols},
            {"eps", rep.eps},
            {"seed", rep.seed},
            {"q", rep.q},
            {"q_star", rep.q_star},
            {"rho_star", rep.rho_star},
            {"rho_at_q", rep.rho_at_q},
            {"mu_separable", rep.mu_separable_value},
            {"empirical_rate", rep.empirical_rate},
            {"iterations", rep.iterations},
            {"converged", rep.converged},
            {"jacobian_eigs", to_json(rep.jacobian_eigs)},
            {"locus", to_json(rep.locus)},
            {"eigs_in_locus", rep.eigs_in_locus},
            {"rate_within_bound", rep.rate_within_bound}};
}

} // namespace admmrate
