#pragma once

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <string>

namespace testutil {

// Self-cleaning unique directory under the system temp root.
struct TempDir {
    std::filesystem::path path;

    explicit TempDir(const std::string& tag) {
        std::string tmpl =
            (std::filesystem::temp_directory_path() / (tag + ".XXXXXX")).string();
        if (!mkdtemp(tmpl.data()))
            throw std::runtime_error("mkdtemp failed for " + tmpl);
        path = tmpl;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path file(const std::string& name) const { return path / name; }
};

}  // namespace testutil
