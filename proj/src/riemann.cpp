#include "distgeo/riemann.hpp"

#include <sstream>

namespace distgeo {

VectorFieldModel VectorFieldModel::parse(const std::vector<std::string>& comps,
                                         const std::vector<std::string>& chart) {
    if (comps.size() != chart.size()) {
        std::ostringstream msg;
        msg << "vector field has " << comps.size() << " components on a " << chart.size()
            << "-dimensional chart";
        throw InputError(msg.str());
    }
    VectorFieldModel out;
    for (const auto& c : comps) out.components.push_back(Expr::parse(c, chart));
    return out;
}

ManifoldModel ManifoldModel::make(std::vector<std::string> chart_names,
                                  const std::vector<std::vector<std::string>>& entries) {
    ManifoldModel mod;
    mod.chart = std::move(chart_names);
    const std::size_t m = mod.chart.size();
    if (m == 0) throw InputError("chart needs at least one coordinate");
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            if (mod.chart[i] == mod.chart[j] && i != j)
                throw InputError("chart coordinate names must be distinct");
    if (entries.size() != m) throw InputError("metric grid must have one row per coordinate");
    for (const auto& row : entries)
        if (row.size() != m) throw InputError("metric grid must be square");

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            mod.metric.push_back(Expr::parse(entries[i][j], mod.chart));

    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            if (!mod.g(static_cast<int>(i), static_cast<int>(j))
                     .same_tree(mod.g(static_cast<int>(j), static_cast<int>(i)))) {
                std::ostringstream msg;
                msg << "metric entries (" << i << "," << j << ") and (" << j << "," << i
                    << ") are not symmetric";
                throw InputError(msg.str());
            }
    return mod;
}

Mat<double> metric_at_spd(const ManifoldModel& mod, const Vec<double>& p) {
    Mat<double> g = metric_at(mod, p);
    Mat<double> l;
    if (!try_cholesky(g, l))
        throw ModelError("metric is not positive definite", p);
    return g;
}

}  // namespace distgeo
