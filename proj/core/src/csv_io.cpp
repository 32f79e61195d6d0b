#include "bsvi/csv_io.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "bsvi/errors.hpp"
#include "bsvi/rng.hpp"

namespace bsvi {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_cloud(const BaselineLaw& law, const std::string& model_id,
                const std::filesystem::path& csv_path) {
    const ParticleCloud& c = law.cloud();
    std::ofstream os(csv_path);
    if (!os) throw Error("save_cloud: cannot open " + csv_path.string());
    os << "m,i,X,dW\n";
    for (std::size_t m = 0; m <= c.grid.M; ++m)
        for (std::size_t i = 0; i < c.N; ++i)
            os << m << ',' << i << ',' << fmt17(c.X[m][i]) << ','
               << fmt17(m < c.grid.M ? c.dW[m][i] : 0.0) << '\n';

    nlohmann::json meta{{"seed", c.seed},
                        {"N", c.N},
                        {"M", c.grid.M},
                        {"T", c.grid.T},
                        {"model", model_id}};
    std::filesystem::path mp = csv_path;
    mp.replace_extension(".meta.json");
    std::ofstream ms(mp);
    ms << meta.dump(2) << '\n';
}

BaselineLaw load_cloud(const std::filesystem::path& csv_path) {
    std::filesystem::path mp = csv_path;
    mp.replace_extension(".meta.json");
    std::ifstream ms(mp);
    if (!ms) throw Error("load_cloud: missing sidecar " + mp.string());
    nlohmann::json meta = nlohmann::json::parse(ms);

    ParticleCloud c;
    c.grid = TimeGrid(meta.at("T").get<double>(), meta.at("M").get<std::size_t>());
    c.N = meta.at("N").get<std::size_t>();
    c.seed = meta.at("seed").get<std::uint64_t>();
    c.stream = rng::kBaselineStream;
    c.X.assign(c.grid.M + 1, std::vector<double>(c.N, 0.0));
    c.dW.assign(c.grid.M, std::vector<double>(c.N, 0.0));

    std::ifstream is(csv_path);
    if (!is) throw Error("load_cloud: cannot open " + csv_path.string());
    std::string line;
    std::getline(is, line);  // header
    while (std::getline(is, line)) {
        std::size_t m, i;
        double x, dw;
        if (std::sscanf(line.c_str(), "%zu,%zu,%lf,%lf", &m, &i, &x, &dw) != 4)
            throw Error("load_cloud: malformed row: " + line);
        if (m > c.grid.M || i >= c.N) throw Error("load_cloud: index out of range: " + line);
        c.X[m][i] = x;
        if (m < c.grid.M) c.dW[m][i] = dw;
    }
    return BaselineLaw(std::move(c));
}

void save_backward(const BackwardSolution& sol, const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw Error("save_backward: cannot open " + csv_path.string());
    os << "m,i,Y,Z,U\n";
    for (std::size_t s = 0; s < sol.Y.size(); ++s)
        for (std::size_t i = 0; i < sol.Y[s].size(); ++i)
            os << sol.t_start + s << ',' << i << ',' << fmt17(sol.Y[s][i]) << ','
               << fmt17(sol.Z[s][i]) << ',' << fmt17(sol.U[s][i]) << '\n';
}

void save_field(const FieldSolution& field, const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw Error("save_field: cannot open " + csv_path.string());
    os << "t,x,u,stderr\n";
    for (std::size_t m = 0; m < field.values.size(); ++m) {
        const double t = field.tgrid.node(m);
        for (std::size_t j = 0; j < field.values[m].size(); ++j) {
            const double se =
                field.stderrs.empty() ? 0.0 : field.stderrs[m][j];
            os << fmt17(t) << ',' << fmt17(field.xgrid.node(j)) << ','
               << fmt17(field.values[m][j]) << ',' << fmt17(se) << '\n';
        }
    }
}

void save_u_field(const UField& field, const TimeGrid& grid,
                  const std::filesystem::path& csv_path) {
    std::ofstream os(csv_path);
    if (!os) throw Error("save_u_field: cannot open " + csv_path.string());
    os << "t,x,u,stderr\n";
    for (const UFieldNode& n : field.nodes) {
        if (!n.ok) continue;
        os << fmt17(grid.node(n.t_index)) << ',' << fmt17(n.x) << ',' << fmt17(n.u) << ','
           << fmt17(n.stderr_) << '\n';
    }
}

}  // namespace bsvi
