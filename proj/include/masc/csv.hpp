// SPDX-License-Identifier: Apache-2.0
//
// masc - Mars integrated sensing and communication simulation library
// Copyright (C) 2026 The masc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <string>
#include <vector>

namespace masc
{
    // RFC-4180 table with LF line endings; floats use 17 significant digits
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header);

        CsvTable &row();
        CsvTable &add(const std::string &field);
        CsvTable &add(const char *field) { return add(std::string(field)); }
        CsvTable &add(double v);
        CsvTable &add(int v);
        CsvTable &add(long long v);
        CsvTable &add(bool v);

        size_t rows() const { return rows_.size(); }
        const std::vector<std::string> &header() const { return header_; }
        std::string str() const;
        void write(const std::string &path) const;

        static std::string format_double(double v);
        static std::string quote(const std::string &field);

    private:
        std::vector<std::string> header_;
        std::vector<std::vector<std::string>> rows_;
    };
}
