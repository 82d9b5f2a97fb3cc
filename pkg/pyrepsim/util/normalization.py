import numpy as np


def zero_mean_normalization(X, mean=None):
    """
    Subtracts the column means of X.

    Parameters
    ----------
    X: np.ndarray (N, D)
        Data with N examples in the rows and D features in the columns
    mean: np.ndarray (D,)
        Column means to subtract. If None they are computed from X.

    Returns
    ----------
    X_normalized: np.ndarray (N, D)
    mean: np.ndarray (D,)
    """
    if mean is None:
        mean = np.mean(X, axis=0)

    X_normalized = X - mean

    return X_normalized, mean


def double_centering(K):
    """
    Computes H K H with H = I - 11^T / n without materializing H:
    row means, column means and the grand mean are subtracted in O(n^2).

    Parameters
    ----------
    K: np.ndarray (N, N)
        Square matrix, usually a kernel matrix

    Returns
    ----------
    np.ndarray (N, N)
    """
    row_mean = np.mean(K, axis=1, keepdims=True)
    col_mean = np.mean(K, axis=0, keepdims=True)
    return K - row_mean - col_mean + np.mean(K)


def max_column_mean(X):
    """
    Largest absolute column mean of X, the quantity a centered matrix keeps at zero.
    """
    return np.max(np.abs(np.mean(X, axis=0)))
