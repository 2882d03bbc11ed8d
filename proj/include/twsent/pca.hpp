#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace twsent {

namespace detail {

// Cyclic Jacobi rotations on a symmetric matrix. Returns eigenvalues in
// `diag` and eigenvectors as columns of `vecs`. Plenty for the covariance
// sizes this project sees (D <= 500).
inline void jacobi_eigen(std::vector<double>& a, int n, std::vector<double>& diag,
                         std::vector<double>& vecs) {
  vecs.assign(static_cast<std::size_t>(n) * n, 0.0);
  for (int i = 0; i < n; ++i) vecs[static_cast<std::size_t>(i) * n + i] = 1.0;
  auto A = [&](int r, int c) -> double& { return a[static_cast<std::size_t>(r) * n + c]; };
  auto V = [&](int r, int c) -> double& { return vecs[static_cast<std::size_t>(r) * n + c]; };

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
    if (off < 1e-26) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = A(p, q);
        if (std::abs(apq) < 1e-300) continue;
        const double theta = (A(q, q) - A(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp - s * akq;
          A(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk - s * aqk;
          A(q, k) = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          const double vkp = V(k, p), vkq = V(k, q);
          V(k, p) = c * vkp - s * vkq;
          V(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  diag.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)] = A(i, i);
}

}  // namespace detail

struct PcaProjection {
  std::vector<std::array<double, 2>> points;
  std::array<double, 2> explained_variance{};  // top-2 eigenvalues of the sample covariance
};

// Mean-center, eigendecompose the sample covariance, project onto the top-2
// axes. Axis sign is fixed so each axis's largest-magnitude loading is
// positive, which keeps plots oriented identically across runs.
inline PcaProjection pca_project(const std::vector<std::vector<float>>& vectors) {
  const std::size_t n = vectors.size();
  if (n < 2) throw std::invalid_argument("pca: need at least 2 vectors");
  const std::size_t dim = vectors[0].size();
  if (dim < 2) throw std::invalid_argument("pca: need dimension >= 2");
  for (const auto& v : vectors)
    if (v.size() != dim) throw std::invalid_argument("pca: ragged input");

  std::vector<double> mean(dim, 0.0);
  for (const auto& v : vectors)
    for (std::size_t d = 0; d < dim; ++d) mean[d] += v[d];
  for (double& m : mean) m /= static_cast<double>(n);

  std::vector<double> centered(n * dim);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t d = 0; d < dim; ++d) centered[i * dim + d] = vectors[i][d] - mean[d];

  std::vector<double> cov(dim * dim, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t r = 0; r < dim; ++r) {
      const double xr = centered[i * dim + r];
      if (xr == 0.0) continue;
      for (std::size_t c = r; c < dim; ++c) cov[r * dim + c] += xr * centered[i * dim + c];
    }
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = r; c < dim; ++c) {
      cov[r * dim + c] /= static_cast<double>(n - 1);
      cov[c * dim + r] = cov[r * dim + c];
    }

  std::vector<double> eigvals, eigvecs;
  detail::jacobi_eigen(cov, static_cast<int>(dim), eigvals, eigvecs);

  std::vector<std::size_t> order(dim);
  for (std::size_t i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return eigvals[a] > eigvals[b]; });

  if (eigvals[order[0]] <= 0.0)
    throw std::runtime_error("pca: rank-0 data (all points identical)");

  PcaProjection out;
  std::array<std::vector<double>, 2> axes;
  for (int k = 0; k < 2; ++k) {
    axes[static_cast<std::size_t>(k)].resize(dim);
    const std::size_t col = order[static_cast<std::size_t>(k)];
    for (std::size_t d = 0; d < dim; ++d)
      axes[static_cast<std::size_t>(k)][d] = eigvecs[d * dim + col];
    // deterministic orientation
    std::size_t imax = 0;
    for (std::size_t d = 1; d < dim; ++d)
      if (std::abs(axes[static_cast<std::size_t>(k)][d]) >
          std::abs(axes[static_cast<std::size_t>(k)][imax]))
        imax = d;
    if (axes[static_cast<std::size_t>(k)][imax] < 0.0)
      for (double& x : axes[static_cast<std::size_t>(k)]) x = -x;
    out.explained_variance[static_cast<std::size_t>(k)] =
        std::max(0.0, eigvals[order[static_cast<std::size_t>(k)]]);
  }

  out.points.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k) {
      double acc = 0.0;
      for (std::size_t d = 0; d < dim; ++d)
        acc += centered[i * dim + d] * axes[static_cast<std::size_t>(k)][d];
      out.points[i][static_cast<std::size_t>(k)] = acc;
    }
  return out;
}

// ---- plot outputs ----------------------------------------------------------

inline void write_projection_csv(const std::vector<std::string>& words, const PcaProjection& proj,
                                 const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("pca: cannot write " + path);
  std::fprintf(f, "word,x,y\n");
  for (std::size_t i = 0; i < words.size(); ++i)
    std::fprintf(f, "%s,%.9g,%.9g\n", words[i].c_str(), proj.points[i][0], proj.points[i][1]);
  std::fclose(f);
}

inline void write_scatter_svg(const std::vector<std::string>& words, const PcaProjection& proj,
                              const std::string& path) {
  const int W = 900, H = 700, margin = 60;
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : proj.points) {
    xmin = std::min(xmin, p[0]);
    xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]);
    ymax = std::max(ymax, p[1]);
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) ymax = ymin + 1.0;
  auto sx = [&](double x) { return margin + (x - xmin) / (xmax - xmin) * (W - 2 * margin); };
  auto sy = [&](double y) { return H - margin - (y - ymin) / (ymax - ymin) * (H - 2 * margin); };

  std::FILE* f = std::fopen(path.c_str(), "wb");
  if (!f) throw std::runtime_error("pca: cannot write " + path);
  std::fprintf(f,
               "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\" "
               "viewBox=\"0 0 %d %d\">\n<rect width=\"%d\" height=\"%d\" fill=\"white\"/>\n",
               W, H, W, H, W, H);
  for (std::size_t i = 0; i < words.size(); ++i) {
    const double x = sx(proj.points[i][0]), y = sy(proj.points[i][1]);
    std::fprintf(f, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"steelblue\"/>\n", x, y);
    std::fprintf(f,
                 "<text x=\"%.2f\" y=\"%.2f\" font-size=\"12\" font-family=\"sans-serif\" "
                 "fill=\"#333\">%s</text>\n",
                 x + 5, y - 5, words[i].c_str());
  }
  std::fprintf(f, "</svg>\n");
  std::fclose(f);
}

}  // namespace twsent
