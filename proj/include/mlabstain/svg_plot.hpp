#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "mlabstain/sweep.hpp"

namespace mlabstain {

/// Two panels against c: normalized loss and abstention size, one polyline
/// per series, drawn from the aggregate rows.
std::string render_sweep_svg(const std::vector<SweepRow>& rows);
void write_sweep_svg(const std::vector<SweepRow>& rows, const std::filesystem::path& path);

}  // namespace mlabstain
