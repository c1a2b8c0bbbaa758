// Copyright 2026 The Gridcomp Authors.
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


#ifndef GRIDCOMP_FILE_IO_H_
#define GRIDCOMP_FILE_IO_H_

#include <string>

namespace gridcomp {

// Whole-file helpers; both throw kIo.
std::string ReadFile(const std::string& path);
void WriteFile(const std::string& path, const std::string& content);

}  // namespace gridcomp

#endif  // GRIDCOMP_FILE_IO_H_
