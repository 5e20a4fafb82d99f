#pragma once

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "clumplab/signal.hpp"

namespace clumplab {

// CSV columns x,re,im with a header line; the grid is recovered from the x column.
void write_signal_csv(std::ostream& out, const Signal& s);
Signal read_signal_csv(std::istream& in);

// {grid:{start,step,count}, values:[[re,im],...], tail_model}
nlohmann::json signal_to_json(const Signal& s);
Signal signal_from_json(const nlohmann::json& j);

nlohmann::json tail_to_json(const TailModel& t);
TailModel tail_from_json(const nlohmann::json& j);
nlohmann::json grid_to_json(const Grid& g);
Grid grid_from_json(const nlohmann::json& j);

// Dispatches on the extension (.csv or .json).
Signal load_signal(const std::string& path);
void save_signal(const std::string& path, const Signal& s);

}  // namespace clumplab
