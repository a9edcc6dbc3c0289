#pragma once

#include <stdexcept>
#include <string>

namespace theanine {

// Error kinds map 1:1 onto CLI exit codes: Usage=1, Data=2, Gateway=3.
enum class ErrorKind { Usage, Data, Gateway };

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

    int exit_code() const noexcept {
        switch (kind_) {
            case ErrorKind::Usage: return 1;
            case ErrorKind::Data: return 2;
            case ErrorKind::Gateway: return 3;
        }
        return 2;
    }

private:
    ErrorKind kind_;
};

}  // namespace theanine
