#pragma once

#include <filesystem>

namespace leakage {

// Renders capacity_curves.svg, decarbonization.svg and lcoe_map.svg from a
// sweep store's summary.csv. Output bytes depend only on the store contents.
// Throws DataError when the store holds no optimal results.
void render_charts(const std::filesystem::path& store_dir);

}  // namespace leakage
