// Copyright 2026 The touchbench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0

#include "core/synthgen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <string>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace touchbench {
namespace {

// Latent kinematic parameters, all in screen fractions / milliseconds.
enum Param : std::size_t {
  kStartX = 0,
  kStartY,
  kAngle,
  kLengthFrac,
  kDurationMs,
  kCurvature,
  kPressure,
  kArea,
  kGapMs,
  kParamCount,
};

struct ParamSpec {
  double base;
  double scale;
  double lo;
  double hi;
};

// Base values describe a typical left swipe; scales are the sensitivity of
// each parameter to one unit of latent spread.
constexpr ParamSpec kParams[kParamCount] = {
    /*start_x*/ {0.78, 0.05, 0.55, 0.95},
    /*start_y*/ {0.50, 0.08, 0.15, 0.85},
    /*angle*/ {3.14159265358979, 0.10, 2.74, 3.54},  // radians, left
    /*length_frac*/ {0.45, 0.07, 0.15, 0.70},
    /*duration_ms*/ {340.0, 55.0, 130.0, 900.0},
    /*curvature*/ {0.06, 0.05, -0.30, 0.35},
    /*pressure*/ {0.50, 0.10, 0.05, 0.95},
    /*area*/ {0.25, 0.07, 0.02, 0.90},
    /*gap_ms*/ {900.0, 220.0, 150.0, 3000.0},
};

double clamp(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

std::string zero_pad(std::size_t v, int width) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%0*zu", width, v);
  return buf;
}

}  // namespace

Dataset generate(const SynthConfig& cfg) {
  if (cfg.n_users == 0 || cfg.sessions_per_user == 0 || cfg.strokes_per_session == 0)
    throw UsageError("InvalidConfig: counts must be positive");
  if (cfg.sigma_between < 0.0 || cfg.sigma_within <= 0.0 || cfg.sigma_sess < 0.0 ||
      cfg.delta_dev < 0.0)
    throw UsageError("InvalidConfig: spreads must be non-negative, sigma_within positive");
  if (cfg.sampling_rate_hz <= 0.0) throw UsageError("InvalidConfig: sampling rate must be > 0");

  std::vector<DeviceSpec> devices = cfg.devices;
  if (devices.empty()) devices.push_back({"iPhone 7", 750, 1334, 4.7, 326});

  const Rng root(cfg.seed);

  // Deterministic per-device offset directions in parameter space; the
  // offset survives resolution normalization because it acts on kinematics,
  // not pixels.
  std::vector<std::array<double, kParamCount>> dev_offsets(devices.size());
  for (std::size_t di = 0; di < devices.size(); ++di) {
    Rng dr = root.fork("device:" + devices[di].model_name);
    for (std::size_t p = 0; p < kParamCount; ++p) dev_offsets[di][p] = dr.normal();
  }

  Dataset out;
  out.provenance = Provenance::kSynthetic;

  for (std::size_t ui = 0; ui < cfg.n_users; ++ui) {
    const std::string user_id = "u" + zero_pad(ui, 4);
    Rng user_rng = root.fork("user:" + user_id);

    double z_user[kParamCount];
    for (std::size_t p = 0; p < kParamCount; ++p) z_user[p] = user_rng.normal();

    const std::size_t di = static_cast<std::size_t>(user_rng.below(devices.size()));
    const DeviceSpec& dev = devices[di];
    const double w = dev.screen_width;
    const double h = dev.screen_height;

    // Each session a day apart, with some start-time jitter.
    const std::int64_t user_epoch =
        1600000000000LL + static_cast<std::int64_t>(user_rng.below(86400000ULL));

    std::vector<SessionRecord> sessions;
    for (std::size_t si = 0; si < cfg.sessions_per_user; ++si) {
      Rng sess_rng = user_rng.fork("sess:" + std::to_string(si));
      double z_sess[kParamCount];
      for (std::size_t p = 0; p < kParamCount; ++p) z_sess[p] = sess_rng.normal();

      SessionRecord rec;
      rec.session_id = "s" + zero_pad(si, 3);
      rec.ordinal = static_cast<int>(si);
      rec.task = Task::kGallery;
      rec.device = dev;

      std::int64_t t = user_epoch + static_cast<std::int64_t>(si) * 86400000LL +
                       static_cast<std::int64_t>(sess_rng.below(600000ULL));

      for (std::size_t ki = 0; ki < cfg.strokes_per_session; ++ki) {
        Rng stroke_rng = sess_rng.fork("stroke:" + std::to_string(ki));

        double v[kParamCount];
        for (std::size_t p = 0; p < kParamCount; ++p) {
          const ParamSpec& ps = kParams[p];
          const double latent = cfg.sigma_between * z_user[p] + cfg.sigma_sess * z_sess[p] +
                                cfg.delta_dev * dev_offsets[di][p] +
                                cfg.sigma_within * stroke_rng.normal();
          v[p] = clamp(ps.base + ps.scale * latent, ps.lo, ps.hi);
        }

        const double x0 = v[kStartX] * w;
        const double y0 = v[kStartY] * h;
        const double len = v[kLengthFrac] * w;
        const double x1 = clamp(x0 + len * std::cos(v[kAngle]), 2.0, w - 3.0);
        const double y1 = clamp(y0 + len * std::sin(v[kAngle]), 2.0, h - 3.0);

        // Quadratic Bezier with a perpendicular control offset.
        const double mx = (x0 + x1) / 2.0, my = (y0 + y1) / 2.0;
        const double ex = x1 - x0, ey = y1 - y0;
        const double elen = std::sqrt(ex * ex + ey * ey);
        const double px = -ey / elen, py = ex / elen;
        const double cx = mx + v[kCurvature] * elen * px;
        const double cy = my + v[kCurvature] * elen * py;

        const double duration = v[kDurationMs];
        const std::size_t n_pts = std::max<std::size_t>(
            3, static_cast<std::size_t>(std::round(duration / 1000.0 * cfg.sampling_rate_hz)) + 1);

        SessionRecord& target = rec;
        for (std::size_t i = 0; i < n_pts; ++i) {
          const double u = static_cast<double>(i) / static_cast<double>(n_pts - 1);
          double x = (1 - u) * (1 - u) * x0 + 2 * (1 - u) * u * cx + u * u * x1;
          double y = (1 - u) * (1 - u) * y0 + 2 * (1 - u) * u * cy + u * u * y1;
          if (i > 0 && i + 1 < n_pts) {
            x += stroke_rng.normal() * 1.2;  // sensor jitter, pixels
            y += stroke_rng.normal() * 1.2;
          }
          TouchPoint pt;
          pt.timestamp_ms = t + static_cast<std::int64_t>(
                                    std::llround(u * duration));
          pt.x = static_cast<int>(clamp(std::round(x), 0.0, w - 1.0));
          pt.y = static_cast<int>(clamp(std::round(y), 0.0, h - 1.0));
          // Pressure rises then falls along the stroke.
          const double bell = 0.75 + 0.25 * std::sin(3.14159265358979 * u);
          pt.pressure = clamp(v[kPressure] * bell + stroke_rng.normal() * 0.02, 0.0, 1.0);
          pt.area = clamp(v[kArea] * bell + stroke_rng.normal() * 0.015, 0.0, 1.0);
          pt.action = i == 0 ? Action::kFingerDown
                             : (i + 1 == n_pts ? Action::kFingerUp : Action::kMove);
          target.points.push_back(pt);
        }
        t += static_cast<std::int64_t>(duration) + static_cast<std::int64_t>(v[kGapMs]);
      }
      sessions.push_back(std::move(rec));
    }
    out.users[user_id] = std::move(sessions);
  }
  return out;
}

}  // namespace touchbench
