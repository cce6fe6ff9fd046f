#pragma once

#include <functional>
#include <string>

namespace spinres {

using WarningHandler = std::function<void(const std::string&)>;

// Soft degradations (drive outside the weak-coupling window, detuning outside
// the near-resonance window) are reported here instead of failing. The
// default handler writes one line to stderr.
void warn(const std::string& message);

// Returns the previous handler. Pass an empty function to silence warnings.
WarningHandler set_warning_handler(WarningHandler handler);

// Restores the previous handler on scope exit.
class ScopedWarningHandler {
public:
    explicit ScopedWarningHandler(WarningHandler handler)
        : previous_(set_warning_handler(std::move(handler))) {}
    ~ScopedWarningHandler() { set_warning_handler(std::move(previous_)); }
    ScopedWarningHandler(const ScopedWarningHandler&) = delete;
    ScopedWarningHandler& operator=(const ScopedWarningHandler&) = delete;

private:
    WarningHandler previous_;
};

}  // namespace spinres
