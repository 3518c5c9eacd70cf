#include "manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <cstdlib>
#include <ctime>

#include "expanse/error.hpp"

namespace expanse::cli {

std::string sha256_hex(const std::string& bytes) {
    std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1) {
        throw InternalError("SHA-256 digest failed");
    }
    static constexpr char kHex[] = "0123456789abcdef";
    std::string out;
    for (unsigned int i = 0; i < len; ++i) {
        out.push_back(kHex[md[i] >> 4]);
        out.push_back(kHex[md[i] & 15]);
    }
    return out;
}

namespace {

std::string build_timestamp() {
    const char* epoch = std::getenv("SOURCE_DATE_EPOCH");
    if (!epoch || !*epoch) return "";
    char* end = nullptr;
    const long long secs = std::strtoll(epoch, &end, 10);
    if (*end != '\0' || secs < 0) return "";
    const std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

}  // namespace

nlohmann::json make_manifest(const std::string& spec_bytes, const std::vector<std::string>& argv,
                             nlohmann::json parameters) {
    std::string command = "expanse";
    for (const auto& a : argv) command += " " + a;
    nlohmann::json m;
    m["tool"] = kToolVersion;
    m["spec_sha256"] = sha256_hex(spec_bytes);
    m["command"] = command;
    m["timestamp"] = build_timestamp();
    m["parameters"] = std::move(parameters);
    return m;
}

}  // namespace expanse::cli
