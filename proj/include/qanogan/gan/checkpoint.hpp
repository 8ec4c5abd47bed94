#pragma once

#include <iosfwd>
#include <string>

#include "qanogan/gan/model.hpp"

namespace qanogan::gan {

// Versioned binary checkpoint: generator configuration, the full gate list
// with bases and parameters (or the classical body), the upscaling and
// critic networks, and the step counters. Optimizer moments are not part of
// a checkpoint; loading yields fresh optimizer state.
void save_model(const GanModel& model, std::ostream& out);
GanModel load_model(std::istream& in);

void save_model_file(const GanModel& model, const std::string& path);
GanModel load_model_file(const std::string& path);

}  // namespace qanogan::gan
