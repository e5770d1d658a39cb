#include "rtmkit/action.hpp"

#include <stdexcept>

namespace rtmkit {

std::string Action::label() const {
    switch (kind) {
        case ActionKind::Tau:
            return "tau";
        case ActionKind::Plain:
            return channel;
        case ActionKind::Send:
            return channel + "!" + datum;
        case ActionKind::Recv:
            return channel + "?" + datum;
        case ActionKind::Frontier:
            return "<frontier>";
    }
    return "tau";
}

Action Action::parse_label(const std::string& text) {
    if (text.empty()) throw std::runtime_error("empty action label");
    if (text == "tau") return tau();
    auto bang = text.find('!');
    auto query = text.find('?');
    if (bang != std::string::npos && query != std::string::npos)
        throw std::runtime_error("malformed action label '" + text + "'");
    if (bang != std::string::npos) {
        if (bang == 0 || bang + 1 >= text.size())
            throw std::runtime_error("malformed send action '" + text + "'");
        return send(text.substr(0, bang), text.substr(bang + 1));
    }
    if (query != std::string::npos) {
        if (query == 0 || query + 1 >= text.size())
            throw std::runtime_error("malformed receive action '" + text + "'");
        return recv(text.substr(0, query), text.substr(query + 1));
    }
    return plain(text);
}

}  // namespace rtmkit
