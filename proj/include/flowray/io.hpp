#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "flowray/approx.hpp"
#include "flowray/oracle.hpp"
#include "flowray/reconstruct.hpp"

namespace flowray::io {

using nlohmann::json;

std::string read_text(const std::string& path);
void write_text(const std::string& path, const std::string& data);

// {"coeffs":[{"p","q","re","im"}], "zero_tol"}
json field_to_json(const PolyField& f);
// check_nonvanishing = false keeps fields that vanish on the disc (audits only)
PolyField field_from_json(const json& j, bool check_nonvanishing = true);
PolyField load_field(const std::string& path, bool check_nonvanishing = true);

json phantom_to_json(const Phantom& f);
Phantom phantom_from_json(const json& j);
Phantom load_phantom(const std::string& path);

// CSV: header "theta\s" then s-nodes; one row per theta. %.17g throughout.
std::string sinogram_csv(const Sinogram& s);
Sinogram sinogram_from_csv(const std::string& text);
// writes <base>.csv and <base>.json; meta goes to the sidecar
void save_sinogram(const Sinogram& s, const std::string& base);
Sinogram load_sinogram(const std::string& csv_path);

std::string grid_csv(const ScalarGrid& g);
json grid_sidecar(const ScalarGrid& g);
// linear [min, max] -> [0, 255] over the mask, top row = largest y
std::string grid_pgm(const ScalarGrid& g);

json to_json(const MembershipReport& r);
json to_json(const HnessReport& r);
json to_json(const ErrorReport& r);
json to_json(const StabilityReport& r);
std::string stability_csv(const StabilityReport& r);
json to_json(const PlemeljReport& r);

// flat "key = value" lines, '#' comments
std::map<std::string, std::string> parse_flat_config(const std::string& text);

}  // namespace flowray::io
