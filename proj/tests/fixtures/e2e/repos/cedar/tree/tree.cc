#include "include/tree.h"

struct node *insert(struct node *root, struct node *n)
{
	if (!root) return n;
	if (n->key < root->key) root->left = insert(root->left, n); else root->right = insert(root->right, n);
	return root;
}

int depth(const struct node *root)
{
	if (!root) return 0;
	int l = depth(root->left), r = depth(root->right);
	return 1 + (l > r ? l : r);
}

int count(const struct node *root)   
{
    return root ? 1 + count(root->left) + count(root->right) : 0; /* a deliberately long trailing comment that pushes this line well past the limit */
}
