#pragma once

#include <filesystem>
#include <string>

#include "bsvi/bsde.hpp"
#include "bsvi/mkv.hpp"
#include "bsvi/pvi.hpp"

namespace bsvi {

// Columnar CSV persistence with fixed column order and 17-significant-digit
// decimal rendering, so identical runs are byte-identical.

// Cloud: `m,i,X,dW` plus a sidecar JSON (same stem, .meta.json) carrying
// seed, N, M, T and the model id.
void save_cloud(const BaselineLaw& law, const std::string& model_id,
                const std::filesystem::path& csv_path);
BaselineLaw load_cloud(const std::filesystem::path& csv_path);

// Backward solution: `m,i,Y,Z,U` with absolute node index m.
void save_backward(const BackwardSolution& sol, const std::filesystem::path& csv_path);

// Dense field: `t,x,u,stderr` (stderr 0 on the pde-oracle route).
void save_field(const FieldSolution& field, const std::filesystem::path& csv_path);

// Sparse probabilistic field: same `t,x,u,stderr` layout.
void save_u_field(const UField& field, const TimeGrid& grid,
                  const std::filesystem::path& csv_path);

// 17-significant-digit rendering used by every writer.
std::string fmt17(double v);

}  // namespace bsvi
