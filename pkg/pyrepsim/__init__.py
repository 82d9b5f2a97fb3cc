from pyrepsim.reprdata import ActivationMatrix, load_matrix, save_matrix, center_columns
from pyrepsim.cka import SimilarityScore, linear_cka_feature, rbf_cka
from pyrepsim.indexes import SimilarityIndexSpec, all_indexes
from pyrepsim.base_index import BaseIndex
