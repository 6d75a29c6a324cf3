// Copyright 2026 The TPLRec Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace tplrec::io {

// Little-endian primitives shared by the TPLE/TPLR/TPLQ formats.
void write_u8(std::ostream& out, std::uint8_t v);
void write_u32(std::ostream& out, std::uint32_t v);
void write_f32(std::ostream& out, float v);
std::uint8_t read_u8(std::istream& in);
std::uint32_t read_u32(std::istream& in);
float read_f32(std::istream& in);

void write_magic(std::ostream& out, std::string_view magic);
// Throws DataError if the next four bytes differ from `magic`.
void expect_magic(std::istream& in, std::string_view magic);

// Row-major single-precision dump of a matrix.
void write_matrix_f32(std::ostream& out, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_f32(std::istream& in, std::uint32_t rows,
                                std::uint32_t cols);

// 64-bit FNV-1a over a file's bytes, as 16 hex digits.
std::string file_hash(const std::string& path);

}  // namespace tplrec::io
