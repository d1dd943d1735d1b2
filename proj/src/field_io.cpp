#include "leafwise/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

namespace leafwise {

nlohmann::json grid_to_json(const TorusGrid& g)
{
    return {{"dims", g.dim}, {"points", g.points}, {"periods", g.periods}};
}

TorusGrid grid_from_json(const nlohmann::json& j)
{
    auto points = j.at("points").get<std::vector<int>>();
    auto periods = j.at("periods").get<std::vector<double>>();
    if (j.contains("dims") && j.at("dims").get<int>() != static_cast<int>(points.size()))
        throw std::invalid_argument("grid dims disagree with points");
    return TorusGrid::make(points, periods);
}

nlohmann::json field_to_json(const ScalarField& f)
{
    std::vector<double> v(f.values().data(), f.values().data() + f.values().size());
    return {{"grid", grid_to_json(f.grid())}, {"values", v}};
}

ScalarField field_from_json(const nlohmann::json& j)
{
    auto g = grid_from_json(j.at("grid"));
    auto v = j.at("values").get<std::vector<double>>();
    return ScalarField(g, Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
}

void write_field_csv(const std::string& path, const ScalarField& f)
{
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << "index,value\n" << std::setprecision(17);
    for (std::size_t i = 0; i < f.size(); ++i) out << i << ',' << f[i] << '\n';
}

ScalarField read_field_csv(const std::string& path, const TorusGrid& grid)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    std::getline(in, line);
    if (line.rfind("index,value", 0) != 0) throw std::runtime_error(path + ": missing index,value header");
    Eigen::VectorXd v(static_cast<Eigen::Index>(grid.size()));
    std::vector<bool> seen(grid.size(), false);
    std::size_t count = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error(path + ": malformed line '" + line + "'");
        std::size_t idx = std::stoul(line.substr(0, comma));
        double val = std::stod(line.substr(comma + 1));
        if (idx >= grid.size() || seen[idx]) throw std::runtime_error(path + ": bad index " + std::to_string(idx));
        seen[idx] = true;
        v[static_cast<Eigen::Index>(idx)] = val;
        ++count;
    }
    if (count != grid.size()) throw std::runtime_error(path + ": expected " + std::to_string(grid.size()) + " values");
    return ScalarField(grid, v);
}

}  // namespace leafwise
