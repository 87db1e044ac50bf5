#pragma once

#include <string>

#include "flor/volume.hpp"

namespace flor {

// Supported on-disk formats:
//  - nrrd: single-file NRRD subset; text header (dimension 3, sizes,
//    spacings, optional axis mins, type double or float, encoding raw,
//    endian little) followed by the raw little-endian payload, x fastest.
//  - raw: little-endian 64-bit floats in <path>, with a JSON sidecar at
//    <path>.json holding dims/spacing/origin.
// auto_detect picks by extension (.nrrd/.nhdr -> nrrd, anything else raw).
enum class VolumeFormat { auto_detect, nrrd, raw };

VolumeGrid load_volume(const std::string& path,
                       VolumeFormat format = VolumeFormat::auto_detect);

// Writes to a temporary file in the destination directory and renames into
// place, so a failed save never leaves a partial file behind.
void save_volume(const VolumeGrid& grid, const std::string& path,
                 VolumeFormat format = VolumeFormat::auto_detect);

VolumeFormat detect_format(const std::string& path);

}  // namespace flor
