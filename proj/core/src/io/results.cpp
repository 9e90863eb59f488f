#include "tracerl/io/results.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tracerl {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_curve_csv(std::ostream& out, const TrainingCurve& curve) {
  out << "episode,return,steps\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << i + 1 << ',' << format_double(curve[i].episode_return) << ',' << curve[i].steps << '\n';
  }
}

TrainingCurve read_curve_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "episode,return,steps") {
    throw std::runtime_error("curve CSV: expected header 'episode,return,steps'");
  }
  TrainingCurve curve;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string episode, ret, steps;
    if (!std::getline(ss, episode, ',') || !std::getline(ss, ret, ',') || !std::getline(ss, steps)) {
      throw std::runtime_error("curve CSV line " + std::to_string(line_no) + ": expected 3 fields");
    }
    try {
      curve.push_back({std::stod(ret), std::stoi(steps)});
    } catch (const std::exception&) {
      throw std::runtime_error("curve CSV line " + std::to_string(line_no) + ": malformed number");
    }
  }
  return curve;
}

void save_curve_csv(const std::string& path, const TrainingCurve& curve) {
  std::ostringstream out;
  write_curve_csv(out, curve);
  write_file(path, out.str());
}

TrainingCurve load_curve_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return read_curve_csv(in);
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path + ": " + e.what());
  }
}

std::vector<double> returns_of(const TrainingCurve& curve) {
  std::vector<double> out;
  out.reserve(curve.size());
  for (const auto& r : curve) out.push_back(r.episode_return);
  return out;
}

void save_loss_csv(const std::string& path, const std::vector<double>& losses) {
  std::ostringstream out;
  out << "epoch,loss\n";
  for (std::size_t i = 0; i < losses.size(); ++i) out << i + 1 << ',' << format_double(losses[i]) << '\n';
  write_file(path, out.str());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace tracerl
