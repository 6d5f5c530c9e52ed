// Copyright 2026 The ARCS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARCS_PGM_HPP
#define ARCS_PGM_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "arcs/frame.hpp"

namespace arcs {

// Binary PGM ("P5", maxval 255). Intensities map as byte / 255.

namespace pgm_detail {

inline int next_token(std::istream& in) {
  // Skips whitespace and '#' comment lines, returns the next integer.
  for (;;) {
    int c = in.peek();
    if (c == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(c)) {
      in.get();
    } else {
      break;
    }
  }
  int value = -1;
  in >> value;
  if (!in) throw std::runtime_error("pgm: malformed header");
  return value;
}

}  // namespace pgm_detail

inline Frame read_pgm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path.string());
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5')
    throw std::runtime_error("pgm: not a binary PGM (P5): " + path.string());
  const int width = pgm_detail::next_token(in);
  const int height = pgm_detail::next_token(in);
  const int maxval = pgm_detail::next_token(in);
  if (width != height)
    throw std::runtime_error("pgm: frame must be square: " + path.string());
  if (maxval != 255)
    throw std::runtime_error("pgm: maxval must be 255: " + path.string());
  in.get();  // single whitespace byte after header
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(width) * height);
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("pgm: truncated pixel data: " + path.string());

  const int n = width;
  Eigen::VectorXd pix(static_cast<Eigen::Index>(n) * n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col)
      pix[static_cast<Eigen::Index>(col) * n + row] =
          raw[static_cast<std::size_t>(row) * n + col] / 255.0;
  return Frame(n, std::move(pix));
}

inline void write_pgm(const std::filesystem::path& path, const Frame& frame) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot write " + path.string());
  const int n = frame.side();
  out << "P5\n" << n << " " << n << "\n255\n";
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(n) * n);
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) {
      const double v = frame.at(row, col);
      raw[static_cast<std::size_t>(row) * n + col] =
          static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("pgm: write failed: " + path.string());
}

}  // namespace arcs

#endif  // ARCS_PGM_HPP
