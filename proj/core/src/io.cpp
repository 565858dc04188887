#include "curlgs/io.hpp"

#include <charconv>
#include <cstdio>
#include <cstring>
#include <sstream>

#include <json.hpp>

#include "curlgs/errors.hpp"

#ifndef CURLGS_VERSION
#define CURLGS_VERSION "0.0.0"
#endif

namespace curlgs {

using ojson = nlohmann::ordered_json;

namespace {

void put_number(ojson& obj, const std::string& key, double value) {
  obj[key] = value;
  obj[key + "_hex"] = format_double_hex(value);
}

void put_vector(ojson& obj, const std::string& key,
                const Eigen::VectorXd& values) {
  ojson plain = ojson::array();
  ojson hex = ojson::array();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    plain.push_back(values[i]);
    hex.push_back(format_double_hex(values[i]));
  }
  obj[key] = std::move(plain);
  obj[key + "_hex"] = std::move(hex);
}

ojson vec3_json(const Vec3& v) {
  return ojson::array({v[0], v[1], v[2]});
}

ojson history_json(const std::vector<PsRecord>& history) {
  ojson out = ojson::array();
  for (const PsRecord& record : history) {
    ojson row;
    row["value"] = record.value;
    row["gradient_norm"] = record.gradient_norm;
    out.push_back(std::move(row));
  }
  return out;
}

ojson strings_json(const std::vector<std::string>& items) {
  ojson out = ojson::array();
  for (const std::string& item : items) out.push_back(item);
  return out;
}

std::string render(const ojson& value) { return value.dump(2) + "\n"; }

std::uint64_t fnv1a_bytes(std::uint64_t hash, const void* data,
                          std::size_t size) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < size; ++i) {
    hash ^= bytes[i];
    hash *= 1099511628211ULL;
  }
  return hash;
}

}  // namespace

const char* to_string(Sector sector) {
  switch (sector) {
    case Sector::all: return "all";
    case Sector::even_z: return "even_z";
    case Sector::odd_z: return "odd_z";
  }
  return "?";
}

std::string format_double(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string format_double_hex(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%a", value);
  return buffer;
}

std::string tool_version() { return CURLGS_VERSION; }

std::string spectrum_csv(const ModeBasis& basis) {
  std::ostringstream out;
  out << "index,k1,k2,k3,kind,polarization,eigenvalue\n";
  int index = 0;
  const auto emit = [&](const Mode& mode, const char* kind) {
    out << index++ << "," << mode.index.k[0] << "," << mode.index.k[1] << ","
        << mode.index.k[2] << "," << kind << "," << mode.index.polarization
        << "," << format_double(mode.eigenvalue) << "\n";
  };
  for (const Mode& mode : basis.divfree) emit(mode, "divfree");
  for (const Mode& mode : basis.gradient) emit(mode, "gradient");
  return out.str();
}

std::string profile_csv(const AxisymState& state, const MeridianGrid& grid) {
  if (state.alpha.size() != grid.unknowns()) {
    throw StructuralError("profile does not match the meridian grid");
  }
  std::ostringstream out;
  out << "r,z,alpha\n";
  for (int idx = 0; idx < grid.unknowns(); ++idx) {
    const int i = idx % grid.nr;
    const int j = idx / grid.nr + 1;
    out << format_double(grid.r(i)) << "," << format_double(grid.z(j)) << ","
        << format_double(state.alpha[idx]) << "\n";
  }
  return out.str();
}

std::string vtk_structured_points(const GridField& field,
                                  const std::string& field_name) {
  const GridSpec& grid = field.grid;
  if (grid.kind != GridKind::UniformVertex) {
    throw StructuralError(
        "VTK export needs a UniformVertex grid; Gauss nodes are not a "
        "raster");
  }
  std::ostringstream out;
  out << "# vtk DataFile Version 3.0\n";
  out << "curlgs vector field\n";
  out << "ASCII\n";
  out << "DATASET STRUCTURED_POINTS\n";
  out << "DIMENSIONS " << grid.resolution[0] << " " << grid.resolution[1]
      << " " << grid.resolution[2] << "\n";
  out << "ORIGIN " << format_double(grid.nodes[0][0]) << " "
      << format_double(grid.nodes[1][0]) << " "
      << format_double(grid.nodes[2][0]) << "\n";
  out << "SPACING " << format_double(grid.nodes[0][1] - grid.nodes[0][0])
      << " " << format_double(grid.nodes[1][1] - grid.nodes[1][0]) << " "
      << format_double(grid.nodes[2][1] - grid.nodes[2][0]) << "\n";
  out << "POINT_DATA " << grid.size() << "\n";
  out << "VECTORS " << field_name << " double\n";
  for (Eigen::Index i = 0; i < field.values.cols(); ++i) {
    out << format_double(field.values(0, i)) << " "
        << format_double(field.values(1, i)) << " "
        << format_double(field.values(2, i)) << "\n";
  }
  return out.str();
}

std::uint64_t meridian_fingerprint(const MeridianGrid& grid) {
  std::uint64_t hash = 1469598103934665603ULL;
  hash = fnv1a_bytes(hash, &grid.nr, sizeof(grid.nr));
  hash = fnv1a_bytes(hash, &grid.nz, sizeof(grid.nz));
  hash = fnv1a_bytes(hash, &grid.radius, sizeof(grid.radius));
  hash = fnv1a_bytes(hash, &grid.height, sizeof(grid.height));
  return hash;
}

std::string solver_report_json(const SolverReport& report,
                               const EnergyBreakdown& energy,
                               const StateNorms& norms,
                               const NehariResidual& residual) {
  ojson out;
  put_number(out, "c0", report.c0);
  put_number(out, "outer_residual", report.outer_residual);
  put_number(out, "el_residual", report.el_residual);
  put_number(out, "multistart_spread", report.multistart_spread);
  put_number(out, "plus_norm", report.plus_norm);
  out["converged_restarts"] = report.converged_restarts;
  ojson energy_obj;
  put_number(energy_obj, "total", energy.total);
  put_number(energy_obj, "quad_curl", energy.quad_curl);
  put_number(energy_obj, "quad_lambda", energy.quad_lambda);
  put_number(energy_obj, "potential", energy.potential);
  put_number(energy_obj, "I_value", energy.I_value);
  out["energy"] = std::move(energy_obj);
  ojson norms_obj;
  put_number(norms_obj, "v_curl", norms.v_curl);
  put_number(norms_obj, "v_l2", norms.v_l2);
  put_number(norms_obj, "w_gradp", norms.w_gradp);
  put_number(norms_obj, "combined", norms.combined);
  out["norms"] = std::move(norms_obj);
  ojson res_obj;
  put_number(res_obj, "self_pairing", residual.self_pairing);
  put_number(res_obj, "tilde_residual", residual.tilde_residual);
  out["nehari_residual"] = std::move(res_obj);
  ojson state_obj;
  put_vector(state_obj, "divfree", report.state.divfree);
  put_vector(state_obj, "gradient", report.state.gradient);
  out["state"] = std::move(state_obj);
  out["ps_history"] = history_json(report.ps_history);
  out["warnings"] = strings_json(report.warnings);
  return render(out);
}

std::string sector_table_json(const std::vector<SectorOutcome>& outcomes,
                              const MeridianGrid& grid) {
  ojson out;
  ojson grid_obj;
  grid_obj["radius"] = grid.radius;
  grid_obj["height"] = grid.height;
  grid_obj["nr"] = grid.nr;
  grid_obj["nz"] = grid.nz;
  out["grid"] = std::move(grid_obj);
  ojson rows = ojson::array();
  const SectorOutcome* best = nullptr;
  for (const SectorOutcome& outcome : outcomes) {
    ojson row;
    row["sector"] = to_string(outcome.sector);
    if (!outcome.solved) {
      row["status"] = "refused";
      row["reason"] = outcome.refusal;
      rows.push_back(std::move(row));
      continue;
    }
    row["status"] = "converged";
    put_number(row, "value", outcome.report.value);
    put_number(row, "outer_residual", outcome.report.outer_residual);
    put_number(row, "el_residual", outcome.report.el_residual);
    put_number(row, "multistart_spread", outcome.report.multistart_spread);
    row["converged_restarts"] = outcome.report.converged_restarts;
    put_vector(row, "alpha", outcome.report.state.alpha);
    row["warnings"] = strings_json(outcome.report.warnings);
    rows.push_back(std::move(row));
    if (!best || outcome.report.value < best->report.value) {
      best = &outcome;
    }
  }
  out["sectors"] = std::move(rows);
  if (best) {
    out["ground_sector"] = to_string(best->sector);
  } else {
    out["ground_sector"] = nullptr;
  }
  return render(out);
}

std::string condition_report_json(const ConditionReport& report) {
  ojson out;
  out["all_hold"] = report.all_hold();
  ojson rows = ojson::array();
  for (const ConditionFinding& finding : report.findings) {
    ojson row;
    row["condition"] = finding.condition;
    switch (finding.status) {
      case ConditionStatus::Certified: row["status"] = "certified"; break;
      case ConditionStatus::SampledPass: row["status"] = "sampled-pass"; break;
      case ConditionStatus::Violated: row["status"] = "violated"; break;
    }
    row["samples"] = finding.samples;
    if (finding.estimate) {
      put_number(row, "estimate", *finding.estimate);
    } else {
      row["estimate"] = nullptr;
    }
    if (finding.witness) {
      ojson witness;
      witness["x"] = vec3_json(finding.witness->x);
      witness["u"] = vec3_json(finding.witness->u);
      if (finding.witness->v) {
        witness["v"] = vec3_json(*finding.witness->v);
      }
      if (finding.witness->t) {
        witness["t"] = *finding.witness->t;
      }
      put_number(witness, "margin", finding.witness->margin);
      row["witness"] = std::move(witness);
    } else {
      row["witness"] = nullptr;
    }
    row["note"] = finding.note;
    rows.push_back(std::move(row));
  }
  out["findings"] = std::move(rows);
  return render(out);
}

std::string oracle_json(const OracleResult& result) {
  ojson out;
  put_number(out, "c0_oracle", result.c0_oracle);
  out["n_directions"] = result.n_directions;
  put_number(out, "max_cluster_spread", result.max_cluster_spread);
  ojson state_obj;
  put_vector(state_obj, "divfree", result.state.divfree);
  put_vector(state_obj, "gradient", result.state.gradient);
  out["state"] = std::move(state_obj);
  return render(out);
}

std::string manifest_json(const RunManifest& manifest) {
  ojson out;
  out["tool"] = "curlgs";
  out["version"] = manifest.tool_version;
  out["config"] = manifest.config_echo;
  char fingerprint[32];
  std::snprintf(fingerprint, sizeof(fingerprint), "0x%016llx",
                static_cast<unsigned long long>(manifest.basis_fingerprint));
  out["basis_fingerprint"] = fingerprint;
  out["threads"] = manifest.threads;
  out["wall_seconds"] = manifest.wall_seconds;
  ojson stages = ojson::array();
  for (const StageTiming& stage : manifest.stages) {
    ojson row;
    row["stage"] = stage.stage;
    row["seconds"] = stage.seconds;
    stages.push_back(std::move(row));
  }
  out["stages"] = std::move(stages);
  out["fixture_values"] = strings_json(manifest.fixture_values);
  out["errors"] = strings_json(manifest.errors);
  return render(out);
}

}  // namespace curlgs
