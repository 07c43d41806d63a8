/* sha256.hpp -- self-contained SHA-256, used for run-manifest hashes and the
 * content-addressed verdict cache keys. */

#ifndef SPECTRA_SHA256_HPP_
#define SPECTRA_SHA256_HPP_

#include <string>

namespace spectra {

// Hex digest of the SHA-256 of `data`.
std::string sha256_hex(const std::string& data);

}  // namespace spectra

#endif  // SPECTRA_SHA256_HPP_
