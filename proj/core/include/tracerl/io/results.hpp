#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "tracerl/agent/training.hpp"

namespace tracerl {

// Shortest-exact decimal form: 17 significant digits, so text round-trips.
std::string format_double(double v);

// Header "episode,return,steps"; episodes are numbered from 1.
void write_curve_csv(std::ostream& out, const TrainingCurve& curve);
TrainingCurve read_curve_csv(std::istream& in);
void save_curve_csv(const std::string& path, const TrainingCurve& curve);
TrainingCurve load_curve_csv(const std::string& path);

std::vector<double> returns_of(const TrainingCurve& curve);

// Header "epoch,loss".
void save_loss_csv(const std::string& path, const std::vector<double>& losses);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace tracerl
