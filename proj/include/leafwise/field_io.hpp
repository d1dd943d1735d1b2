#pragma once
#include "leafwise/grid.hpp"
#include <json.hpp>
#include <string>

namespace leafwise {

nlohmann::json grid_to_json(const TorusGrid& g);
TorusGrid grid_from_json(const nlohmann::json& j);

// {grid: {dims, points, periods}, values: [...]}
nlohmann::json field_to_json(const ScalarField& f);
ScalarField field_from_json(const nlohmann::json& j);

// header "index,value", one value per line
void write_field_csv(const std::string& path, const ScalarField& f);
ScalarField read_field_csv(const std::string& path, const TorusGrid& grid);

}  // namespace leafwise
