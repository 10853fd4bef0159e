#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "nlheat/grid.hpp"
#include "nlheat/kernels.hpp"
#include "nlheat/solver.hpp"
#include "nlheat/symbol.hpp"

namespace nlheat {

/// Flat binary field: 32-byte header (magic "NLHK", u32 d, u32 N, f64 L,
/// f64 t, 4 zero bytes), then N^d little-endian doubles in row-major node
/// order.
void write_field_binary(const std::string& path, const Field& f, double time);

struct LoadedField {
    Field field;
    double time = 0.0;
};
LoadedField read_field_binary(const std::string& path);

/// CSV rows: node coordinates then the value.
void write_field_csv(const std::string& path, const Field& f);

/// CSV rows: frequency coordinates, symbol value, achieved tolerance.
void write_symbol_csv(const std::string& path, const SymbolField& sf);

/// {"kind": "...", "d": int, "params": {...}}
LevyKernelSpec spec_from_json(const nlohmann::json& j);

/// Shorthand "fractional:alpha=1,..." used by the command line.
LevyKernelSpec spec_from_string(const std::string& text, int d);

/// {"atoms":[{"x":[...],"w":...}...], "density": "optional field path"}
RadonMeasure measure_from_json(const nlohmann::json& j, const Grid& g);

}  // namespace nlheat
