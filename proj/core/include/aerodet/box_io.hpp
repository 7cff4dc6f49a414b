#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "aerodet/boxes.hpp"

namespace aerodet {

// Ground truth: header `image_id,x,y,w,h,class`.
// Detections:   header `image_id,x,y,w,h,score,class`.
// Malformed rows throw InputFormatError carrying the 1-based line number.
std::vector<GroundTruth> read_ground_truth_csv(std::istream& in);
std::vector<Detection> read_detections_csv(std::istream& in);

void write_ground_truth_csv(std::ostream& out, const std::vector<GroundTruth>& gts);
void write_detections_csv(std::ostream& out, const std::vector<Detection>& dets);

}  // namespace aerodet
