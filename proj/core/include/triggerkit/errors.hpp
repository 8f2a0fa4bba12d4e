#pragma once

#include <stdexcept>
#include <string>

namespace triggerkit {

// Raised for malformed inputs: bad records, unknown labels, missing files,
// misaligned stores. The CLI maps this to exit code 2.
class data_error : public std::runtime_error {
public:
    explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a pipeline stage detects stale upstream outputs (fingerprint
// mismatch). The CLI maps this to exit code 3. `stage` names what to rerun.
class stale_pipeline_error : public std::runtime_error {
public:
    stale_pipeline_error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace triggerkit
