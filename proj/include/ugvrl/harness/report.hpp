#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace ugvrl {

/// Shortest round-trip decimal form of a double.
inline std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Wilson score interval for a binomial proportion (z = 1.96 gives 95%).
inline Interval wilson_interval(long successes, long trials, double z = 1.959963984540054) {
  if (trials <= 0) return {0.0, 1.0};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * n)) / (1 + z2 / n);
  const double half = z * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n)) / (1 + z2 / n);
  return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

/// Runs fn(0..n-1) on up to `workers` threads; result i always lands in slot i.
template <class R>
std::vector<R> parallel_map(std::size_t n, const std::function<R(std::size_t)>& fn,
                            std::size_t workers = 0) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, std::max<std::size_t>(n, 1));
  std::vector<R> out(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

// --- SVG line chart ---------------------------------------------------------

struct Series {
  std::string label;
  std::vector<double> y;  // x = index
};

/// Self-contained SVG line chart. Output depends only on the input data.
inline std::string svg_line_chart(const std::vector<Series>& series, const std::string& title,
                                  const std::string& x_label, const std::string& y_label) {
  constexpr double W = 800, H = 480, left = 80, right = 170, top = 40, bottom = 60;
  const char* palette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b"};

  double ymin = 0, ymax = 1;
  std::size_t xmax = 1;
  bool any = false;
  for (const auto& s : series)
    for (double v : s.y) {
      if (!any) ymin = ymax = v, any = true;
      ymin = std::min(ymin, v);
      ymax = std::max(ymax, v);
    }
  for (const auto& s : series) xmax = std::max(xmax, s.y.size() > 0 ? s.y.size() - 1 : 1);
  if (ymax - ymin < 1e-12) ymin -= 1, ymax += 1;

  const double pw = W - left - right, ph = H - top - bottom;
  auto px = [&](double x) { return left + pw * x / static_cast<double>(xmax); };
  auto py = [&](double y) { return top + ph * (1.0 - (y - ymin) / (ymax - ymin)); };
  auto f = [](double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.2f", v);
    return std::string(b);
  };

  std::string o;
  o += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + f(W) + "\" height=\"" + f(H) +
       "\" viewBox=\"0 0 " + f(W) + " " + f(H) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o += "<text x=\"" + f(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + title +
       "</text>\n";
  o += "<rect x=\"" + f(left) + "\" y=\"" + f(top) + "\" width=\"" + f(pw) + "\" height=\"" +
       f(ph) + "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    const double xv = static_cast<double>(xmax) * i / 4.0;
    o += "<text x=\"" + f(left - 6) + "\" y=\"" + f(py(yv) + 4) + "\" text-anchor=\"end\">" +
         f(yv) + "</text>\n";
    o += "<text x=\"" + f(px(xv)) + "\" y=\"" + f(top + ph + 18) + "\" text-anchor=\"middle\">" +
         f(xv) + "</text>\n";
  }
  o += "<text x=\"" + f(left + pw / 2) + "\" y=\"" + f(H - 16) + "\" text-anchor=\"middle\">" +
       x_label + "</text>\n";
  o += "<text x=\"18\" y=\"" + f(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       f(top + ph / 2) + ")\">" + y_label + "</text>\n";

  for (std::size_t s = 0; s < series.size(); ++s) {
    const char* colour = palette[s % 6];
    if (!series[s].y.empty()) {
      o += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.2\" points=\"";
      for (std::size_t i = 0; i < series[s].y.size(); ++i) {
        if (i) o += ' ';
        o += f(px(static_cast<double>(i))) + "," + f(py(series[s].y[i]));
      }
      o += "\"/>\n";
    }
    const double ly = top + 14 + 18.0 * static_cast<double>(s);
    o += "<line x1=\"" + f(W - right + 12) + "\" y1=\"" + f(ly) + "\" x2=\"" + f(W - right + 32) +
         "\" y2=\"" + f(ly) + "\" stroke=\"" + colour + "\" stroke-width=\"2\"/>\n";
    o += "<text x=\"" + f(W - right + 38) + "\" y=\"" + f(ly + 4) + "\">" + series[s].label +
         "</text>\n";
  }
  o += "</svg>\n";
  return o;
}

}  // namespace ugvrl
